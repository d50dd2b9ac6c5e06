#ifndef TORICSEC_H
#define TORICSEC_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define TORICSEC_OK 0

#define TORICSEC_ERR_INVALID 1

#define TORICSEC_ERR_BUDGET 2

#define TORICSEC_ERR_INTERNAL 3

/**
 * Opaque handle for a polytope P(a,b) together with its parameters.
 */
typedef struct ToricsecPolytope ToricsecPolytope;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build the polytope P(a,b) for k factors with degrees `a` and dimensions
 * `b`. On success writes a handle to `out`.
 */
int toricsec_polytope_new(const int64_t *a,
                          const int64_t *b,
                          uintptr_t k,
                          struct ToricsecPolytope **out);

void toricsec_polytope_free(struct ToricsecPolytope *h);

/**
 * Dimension of P(a,b); -1 on a null handle.
 */
int64_t toricsec_polytope_dim(const struct ToricsecPolytope *h);

/**
 * Number of lattice points of P(a,b); 0 on a null handle.
 */
uint64_t toricsec_polytope_point_count(const struct ToricsecPolytope *h);

/**
 * Number of facets of P(a,b); 0 on a null handle.
 */
uint64_t toricsec_polytope_facet_count(const struct ToricsecPolytope *h);

/**
 * Smooth / Gorenstein / Q-Gorenstein classification of the instance behind
 * the handle, as a JSON document in `out_json`.
 */
int toricsec_classify_json(const struct ToricsecPolytope *h, char **out_json);

/**
 * Facet cross-check (closed form vs brute force) as JSON.
 */
int toricsec_facets_json(const struct ToricsecPolytope *h, char **out_json);

/**
 * Singular-locus components with descriptions, as JSON.
 */
int toricsec_singular_json(const struct ToricsecPolytope *h, char **out_json);

/**
 * Normality up to dilation `s_max` plus lattice saturation, as JSON.
 */
int toricsec_normality_json(const struct ToricsecPolytope *h, int64_t s_max, char **out_json);

/**
 * Release a string returned by any `_json` function.
 */
void toricsec_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TORICSEC_H */
