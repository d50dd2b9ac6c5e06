//! C ABI for the toricsec library.
//!
//! Handles are opaque pointers; every constructor has a matching `_free`.
//! Functions return an error code: 0 success, 1 invalid argument, 2 budget
//! exceeded, 3 internal error. Strings returned through out-parameters are
//! NUL-terminated and must be released with `toricsec_string_free`.

use std::ffi::CString;
use std::os::raw::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use toricsec::classify::cross_check;
use toricsec::normality::{check_lattice_saturation, check_normality};
use toricsec::polytope::{LatticePolytope, PolytopeError, DEFAULT_ENUM_BUDGET};
use toricsec::segre_veronese::{cross_check_facets, SVParams};
use toricsec::singular::{describe_component, expected_component_count, singular_components};

pub const TORICSEC_OK: c_int = 0;
pub const TORICSEC_ERR_INVALID: c_int = 1;
pub const TORICSEC_ERR_BUDGET: c_int = 2;
pub const TORICSEC_ERR_INTERNAL: c_int = 3;

/// Opaque handle for a polytope P(a,b) together with its parameters.
pub struct ToricsecPolytope {
    params: SVParams,
    poly: LatticePolytope,
    facet_count: usize,
}

fn err_code(e: &PolytopeError) -> c_int {
    match e {
        PolytopeError::BudgetExceeded { .. } | PolytopeError::TooManyFacets(_) => {
            TORICSEC_ERR_BUDGET
        }
        PolytopeError::Empty => TORICSEC_ERR_INVALID,
    }
}

unsafe fn read_params(a: *const i64, b: *const i64, k: usize) -> Option<SVParams> {
    if a.is_null() || b.is_null() || k == 0 {
        return None;
    }
    let a = slice::from_raw_parts(a, k).to_vec();
    let b = slice::from_raw_parts(b, k).to_vec();
    SVParams::new(a, b).ok()
}

fn guarded<F: FnOnce() -> c_int>(f: F) -> c_int {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(TORICSEC_ERR_INTERNAL)
}

fn out_string(s: String, out: *mut *mut c_char) -> c_int {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            TORICSEC_OK
        }
        Err(_) => TORICSEC_ERR_INTERNAL,
    }
}

/// Build the polytope P(a,b) for k factors with degrees `a` and dimensions
/// `b`. On success writes a handle to `out`.
#[no_mangle]
pub unsafe extern "C" fn toricsec_polytope_new(
    a: *const i64,
    b: *const i64,
    k: usize,
    out: *mut *mut ToricsecPolytope,
) -> c_int {
    if out.is_null() {
        return TORICSEC_ERR_INVALID;
    }
    let params = match read_params(a, b, k) {
        Some(p) => p,
        None => return TORICSEC_ERR_INVALID,
    };
    guarded(|| {
        let poly = match params.build_polytope(DEFAULT_ENUM_BUDGET) {
            Ok(p) => p,
            Err(e) => return err_code(&e),
        };
        let facet_count = poly.facets().len();
        let h = Box::new(ToricsecPolytope { params, poly, facet_count });
        unsafe { *out = Box::into_raw(h) };
        TORICSEC_OK
    })
}

#[no_mangle]
pub unsafe extern "C" fn toricsec_polytope_free(h: *mut ToricsecPolytope) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Dimension of P(a,b); -1 on a null handle.
#[no_mangle]
pub unsafe extern "C" fn toricsec_polytope_dim(h: *const ToricsecPolytope) -> i64 {
    match h.as_ref() {
        Some(h) => h.poly.dimension(),
        None => -1,
    }
}

/// Number of lattice points of P(a,b); 0 on a null handle.
#[no_mangle]
pub unsafe extern "C" fn toricsec_polytope_point_count(h: *const ToricsecPolytope) -> u64 {
    match h.as_ref() {
        Some(h) => h.poly.points.len() as u64,
        None => 0,
    }
}

/// Number of facets of P(a,b); 0 on a null handle.
#[no_mangle]
pub unsafe extern "C" fn toricsec_polytope_facet_count(h: *const ToricsecPolytope) -> u64 {
    match h.as_ref() {
        Some(h) => h.facet_count as u64,
        None => 0,
    }
}

/// Smooth / Gorenstein / Q-Gorenstein classification of the instance behind
/// the handle, as a JSON document in `out_json`.
#[no_mangle]
pub unsafe extern "C" fn toricsec_classify_json(
    h: *const ToricsecPolytope,
    out_json: *mut *mut c_char,
) -> c_int {
    let h = match h.as_ref() {
        Some(h) => h,
        None => return TORICSEC_ERR_INVALID,
    };
    if out_json.is_null() {
        return TORICSEC_ERR_INVALID;
    }
    guarded(|| {
        let c = match cross_check(&h.params, DEFAULT_ENUM_BUDGET) {
            Ok(c) => c,
            Err(toricsec::classify::ClassifyError::Polytope(e)) => return err_code(&e),
        };
        let doc = serde_json::json!({
            "a": h.params.a,
            "b": h.params.b,
            "classification": c,
        });
        out_string(serde_json::to_string(&doc).unwrap(), out_json)
    })
}

/// Facet cross-check (closed form vs brute force) as JSON.
#[no_mangle]
pub unsafe extern "C" fn toricsec_facets_json(
    h: *const ToricsecPolytope,
    out_json: *mut *mut c_char,
) -> c_int {
    let h = match h.as_ref() {
        Some(h) => h,
        None => return TORICSEC_ERR_INVALID,
    };
    if out_json.is_null() {
        return TORICSEC_ERR_INVALID;
    }
    guarded(|| {
        let f = match cross_check_facets(&h.params, DEFAULT_ENUM_BUDGET) {
            Ok(f) => f,
            Err(e) => return err_code(&e),
        };
        let doc = serde_json::json!({
            "a": h.params.a,
            "b": h.params.b,
            "facet_check": f,
        });
        out_string(serde_json::to_string(&doc).unwrap(), out_json)
    })
}

/// Singular-locus components with descriptions, as JSON.
#[no_mangle]
pub unsafe extern "C" fn toricsec_singular_json(
    h: *const ToricsecPolytope,
    out_json: *mut *mut c_char,
) -> c_int {
    let h = match h.as_ref() {
        Some(h) => h,
        None => return TORICSEC_ERR_INVALID,
    };
    if out_json.is_null() {
        return TORICSEC_ERR_INVALID;
    }
    guarded(|| {
        use toricsec::singular::SingularError;
        let comps = match singular_components(&h.poly, &h.params) {
            Ok(c) => c,
            Err(SingularError::Polytope(e)) => return err_code(&e),
            Err(_) => return TORICSEC_ERR_INTERNAL,
        };
        let mut descriptions = Vec::new();
        for c in &comps {
            match describe_component(&h.params, c) {
                Ok(d) => descriptions.push(d),
                Err(_) => return TORICSEC_ERR_INTERNAL,
            }
        }
        let doc = serde_json::json!({
            "a": h.params.a,
            "b": h.params.b,
            "components": comps,
            "descriptions": descriptions,
            "expected_count": expected_component_count(&h.params),
        });
        out_string(serde_json::to_string(&doc).unwrap(), out_json)
    })
}

/// Normality up to dilation `s_max` plus lattice saturation, as JSON.
#[no_mangle]
pub unsafe extern "C" fn toricsec_normality_json(
    h: *const ToricsecPolytope,
    s_max: i64,
    out_json: *mut *mut c_char,
) -> c_int {
    let h = match h.as_ref() {
        Some(h) => h,
        None => return TORICSEC_ERR_INVALID,
    };
    if out_json.is_null() || s_max < 1 {
        return TORICSEC_ERR_INVALID;
    }
    guarded(|| {
        use toricsec::normality::NormalityError;
        let code = |e: &NormalityError| match e {
            NormalityError::Polytope(p) => err_code(p),
        };
        let r = match check_normality(&h.poly, s_max, DEFAULT_ENUM_BUDGET) {
            Ok(r) => r,
            Err(e) => return code(&e),
        };
        let s = match check_lattice_saturation(&h.poly) {
            Ok(s) => s,
            Err(e) => return code(&e),
        };
        let doc = serde_json::json!({
            "a": h.params.a,
            "b": h.params.b,
            "normality": r,
            "saturation": s,
        });
        out_string(serde_json::to_string(&doc).unwrap(), out_json)
    })
}

/// Release a string returned by any `_json` function.
#[no_mangle]
pub unsafe extern "C" fn toricsec_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
