//! Normal fan of P(a,b), smoothness of its cones, and the components of the
//! singular locus of the associated toric variety, with closed-form
//! cross-checks for vertex smoothness and component counts.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::exact::LatticeBasis;
use crate::polytope::{cone_smooth, IneqLabel, LatticePolytope, PolytopeError};
use crate::segre_veronese::SVParams;

#[derive(Debug, Error)]
pub enum SingularError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("vertex {0:?} does not match any modeled pattern")]
    UnmodeledVertex(Vec<i64>),
    #[error("singular cone does not match any modeled component kind")]
    UnmodeledComponent,
}

/// A cone of the normal fan, attached to the face of P it is normal to.
#[derive(Debug, Clone)]
pub struct FanCone {
    pub face_points: Vec<Vec<i64>>,
    /// primitive inward facet normals restricted to the affine lattice of P
    pub rays: Vec<Vec<BigInt>>,
    /// indices into `facets(P)` of the facets containing the face
    pub facet_indices: Vec<usize>,
    pub smooth: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ComponentKind {
    /// vertex class e_{i1,.} + e_{i2,.} with a_{i1} = a_{i2} = 1 (1-based)
    PairOnes(usize, usize),
    /// vertex class 2 e_{i,.} with a_i = 2 (1-based)
    DoubleTwo(usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularComponent {
    pub kind: ComponentKind,
    pub face_points: Vec<Vec<i64>>,
}

/// Affine lattice of P (generated by differences of its lattice points) and
/// the facet normals of P expressed primitively in coordinates dual to it.
struct FanContext {
    #[allow(dead_code)]
    lattice: LatticeBasis,
    facets: Vec<crate::polytope::Face>,
    facet_normals: Vec<Vec<BigInt>>,
    /// one supporting inequality index per facet, not tight on all of P;
    /// its tight point set is exactly the facet
    facet_rep_ineq: Vec<usize>,
    /// labels of the non-everywhere-tight inequalities in each facet closure
    facet_labels: Vec<Vec<IneqLabel>>,
}

fn fan_context(poly: &LatticePolytope) -> FanContext {
    let n = poly.ambient_dim;
    let base = &poly.points[0];
    let lattice = LatticeBasis::from_i64_generators(
        n,
        poly.points[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(&x, &y)| x - y).collect()),
    );
    let everywhere = poly.everywhere_tight();
    let facets = poly.facets();
    let mut facet_normals = Vec::new();
    let mut facet_rep_ineq = Vec::new();
    let mut facet_labels = Vec::new();
    for f in &facets {
        // any supporting inequality that is not tight on all of P restricts
        // to a positive multiple of the facet's normal
        let proper: Vec<usize> = f
            .tight_set
            .iter()
            .copied()
            .filter(|i| !everywhere.contains(i))
            .collect();
        let idx = *proper.first().expect("facet must have a proper supporting inequality");
        let u: Vec<BigInt> = poly.inequalities[idx]
            .normal
            .iter()
            .map(|&x| BigInt::from(x))
            .collect();
        let w = lattice.dual_coords(&u);
        facet_normals.push(crate::exact::primitive_from_rational(
            &w.iter().map(|x| crate::exact::Rat::from(x.clone())).collect::<Vec<_>>(),
        ));
        facet_rep_ineq.push(idx);
        facet_labels.push(proper.iter().map(|&i| poly.inequalities[i].label.clone()).collect());
    }
    FanContext { lattice, facets, facet_normals, facet_rep_ineq, facet_labels }
}

/// The full normal fan: one cone per nonempty face of P.  Intended for small
/// instances; refuses when the face lattice is too large.
pub fn normal_fan(poly: &LatticePolytope) -> Result<Vec<FanCone>, SingularError> {
    if poly.points.is_empty() {
        return Ok(vec![]);
    }
    let ctx = fan_context(poly);
    let faces = poly.faces()?;
    let facet_sets: Vec<BTreeSet<Vec<i64>>> = ctx
        .facets
        .iter()
        .map(|f| f.points.iter().cloned().collect())
        .collect();
    Ok(faces
        .into_iter()
        .map(|face| {
            let facet_indices: Vec<usize> = facet_sets
                .iter()
                .enumerate()
                .filter(|(_, fs)| face.points.iter().all(|p| fs.contains(p)))
                .map(|(i, _)| i)
                .collect();
            let rays: Vec<Vec<BigInt>> =
                facet_indices.iter().map(|&i| ctx.facet_normals[i].clone()).collect();
            let smooth = cone_smooth(&rays);
            FanCone { face_points: face.points, rays, facet_indices, smooth }
        })
        .collect())
}

/// Minimal singular cones of the normal fan, reported as components of the
/// singular locus.  Works directly from the vertex cones: any singular cone is
/// an intersection of singular vertex cones (cones contained in a smooth cone
/// are smooth), so the closure of the singular vertex cones under pairwise
/// intersection contains all minimal singular cones.
pub fn singular_components(
    poly: &LatticePolytope,
    params: &SVParams,
) -> Result<Vec<SingularComponent>, SingularError> {
    if poly.points.len() <= 1 {
        return Ok(vec![]);
    }
    let ctx = fan_context(poly);
    let verts = poly.vertices();
    let mut singular_sets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for v in &verts {
        let idxs: BTreeSet<usize> = (0..ctx.facets.len())
            .filter(|&i| poly.inequalities[ctx.facet_rep_ineq[i]].tight(v))
            .collect();
        let rays: Vec<Vec<BigInt>> =
            idxs.iter().map(|&i| ctx.facet_normals[i].clone()).collect();
        if !cone_smooth(&rays) {
            singular_sets.insert(idxs);
        }
    }
    // close under intersection, discarding smooth intersections
    let mut all: Vec<BTreeSet<usize>> = singular_sets.iter().cloned().collect();
    let mut i = 0;
    while i < all.len() {
        for j in 0..i {
            let inter: BTreeSet<usize> = all[i].intersection(&all[j]).cloned().collect();
            if inter.is_empty() || all.contains(&inter) {
                continue;
            }
            let rays: Vec<Vec<BigInt>> =
                inter.iter().map(|&x| ctx.facet_normals[x].clone()).collect();
            if !cone_smooth(&rays) {
                all.push(inter);
            }
        }
        i += 1;
    }
    // minimal by ray-set inclusion
    let minimal: Vec<&BTreeSet<usize>> = all
        .iter()
        .filter(|s| !all.iter().any(|t| *t != **s && t.is_subset(s)))
        .collect();
    let mut out = Vec::new();
    for rayset in minimal {
        let face_points: Vec<Vec<i64>> = poly
            .points
            .iter()
            .filter(|p| {
                rayset
                    .iter()
                    .all(|&fi| poly.inequalities[ctx.facet_rep_ineq[fi]].tight(p))
            })
            .cloned()
            .collect();
        let kind = component_kind(params, &ctx, rayset)?;
        out.push(SingularComponent { kind, face_points });
    }
    out.sort_by_key(|c| c.kind);
    Ok(out)
}

fn component_kind(
    params: &SVParams,
    ctx: &FanContext,
    rayset: &BTreeSet<usize>,
) -> Result<ComponentKind, SingularError> {
    let mut pair_ones: Vec<usize> = Vec::new();
    let mut double_two: Vec<usize> = Vec::new();
    let mut has_f = false;
    for &fi in rayset {
        for l in &ctx.facet_labels[fi] {
            match l {
                IneqLabel::LowerBoundF => has_f = true,
                IneqLabel::CapR(i) => {
                    if params.a[i - 1] == 1 {
                        if !pair_ones.contains(i) {
                            pair_ones.push(*i);
                        }
                    } else if params.a[i - 1] == 2 && !double_two.contains(i) {
                        double_two.push(*i);
                    }
                }
                _ => {}
            }
        }
    }
    if !has_f {
        return Err(SingularError::UnmodeledComponent);
    }
    match (pair_ones.len(), double_two.len()) {
        (2, 0) => Ok(ComponentKind::PairOnes(pair_ones[0], pair_ones[1])),
        (0, 1) => Ok(ComponentKind::DoubleTwo(double_two[0])),
        _ => Err(SingularError::UnmodeledComponent),
    }
}

/// Closed-form status of a candidate vertex of P(a,b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VertexStatus {
    pub is_vertex: bool,
    /// smoothness of the vertex cone; meaningful only when is_vertex
    pub smooth: bool,
}

/// Closed-form vertex classification.  `v` is an ambient coordinate vector.
pub fn expected_vertex_status(p: &SVParams, v: &[i64]) -> Result<VertexStatus, SingularError> {
    let n = p.n();
    if v.len() != n || v.iter().any(|&x| x < 0) {
        return Err(SingularError::UnmodeledVertex(v.to_vec()));
    }
    let layout = p.layout();
    let total: i64 = v.iter().sum();
    let k = p.k();
    if total != 2 {
        // off F, a point is a vertex of P iff it is a vertex of the product
        // of dilated simplices: each block either zero or a_i at a single slot
        let mut ok = total > 2;
        for i in 0..k {
            let off = p.block_offset(i);
            let block = &v[off..off + p.b[i] as usize];
            let s: i64 = block.iter().sum();
            let nz = block.iter().filter(|&&x| x != 0).count();
            if !(s == 0 || (s == p.a[i] && nz == 1)) {
                ok = false;
                break;
            }
        }
        return Ok(VertexStatus { is_vertex: ok, smooth: ok });
    }
    let support: Vec<(usize, i64)> = v
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(idx, &x)| (idx, x))
        .collect();
    match support.as_slice() {
        [(idx, 2)] => {
            let i = layout[*idx].0;
            let ai = p.a[i - 1];
            let is_vertex = ai >= 2;
            let smooth = ai >= 3
                || (ai == 2 && (k == 1 || (k == 2 && p.b[2 - i] == 1)));
            Ok(VertexStatus { is_vertex, smooth: is_vertex && smooth })
        }
        [(x, 1), (y, 1)] => {
            let (i1, i2) = (layout[*x].0, layout[*y].0);
            if i1 == i2 {
                return Ok(VertexStatus { is_vertex: false, smooth: false });
            }
            let (a1, a2) = (p.a[i1 - 1], p.a[i2 - 1]);
            let is_vertex = a1.min(a2) == 1;
            let smooth = if k == 2 {
                true
            } else if a1 == 1 && a2 == 1 {
                k == 3 && {
                    let third = (1..=3).find(|i| *i != i1 && *i != i2).unwrap();
                    p.b[third - 1] == 1
                }
            } else {
                // one factor with a = 1, the other with a >= 2
                a1.min(a2) == 1 && a1.max(a2) >= 2
            };
            Ok(VertexStatus { is_vertex, smooth: is_vertex && smooth })
        }
        _ => Err(SingularError::UnmodeledVertex(v.to_vec())),
    }
}

/// Closed-form number of singular-locus components.
pub fn expected_component_count(p: &SVParams) -> u64 {
    let k = p.k();
    let (a, b) = (p.a.as_slice(), p.b.as_slice());
    match k {
        1 => 0,
        2 => {
            if a[0] == 2 && a[1] == 2 {
                (b[0] > 1) as u64 + (b[1] > 1) as u64
            } else if a[0] == 2 || a[1] == 2 {
                // exactly one factor with a_i = 2; component iff the other
                // factor has b > 1
                let other = if a[0] == 2 { 1 } else { 0 };
                (b[other] > 1) as u64
            } else {
                0
            }
        }
        _ => {
            let k1 = a.iter().filter(|&&x| x == 1).count() as u64;
            let k2 = a.iter().filter(|&&x| x == 2).count() as u64;
            let s = if k == 3 {
                (0..3)
                    .filter(|&i| b[i] == 1 && (0..3).all(|j| j == i || a[j] == 1))
                    .count() as u64
            } else {
                0
            };
            k1 * (k1.saturating_sub(1)) / 2 + k2 - s
        }
    }
}

/// Human-readable description of what a component is, after verifying its
/// face has the expected lattice-point pattern.
pub fn describe_component(
    p: &SVParams,
    c: &SingularComponent,
) -> Result<String, SingularError> {
    let layout = p.layout();
    let expected_points: BTreeSet<Vec<i64>> = match c.kind {
        ComponentKind::PairOnes(i1, i2) => {
            let mut out = BTreeSet::new();
            for (x, &(bi, _)) in layout.iter().enumerate() {
                for (y, &(bj, _)) in layout.iter().enumerate() {
                    if bi == i1 && bj == i2 {
                        let mut v = vec![0i64; p.n()];
                        v[x] += 1;
                        v[y] += 1;
                        out.insert(v);
                    }
                }
            }
            out
        }
        ComponentKind::DoubleTwo(i) => {
            let mut out = BTreeSet::new();
            let off = p.block_offset(i - 1);
            let bi = p.b[i - 1] as usize;
            for x in 0..bi {
                for y in x..bi {
                    let mut v = vec![0i64; p.n()];
                    v[off + x] += 1;
                    v[off + y] += 1;
                    out.insert(v);
                }
            }
            out
        }
    };
    let actual: BTreeSet<Vec<i64>> = c.face_points.iter().cloned().collect();
    if actual != expected_points {
        return Err(SingularError::UnmodeledComponent);
    }
    let factor = |i: usize| -> String {
        let (ai, bi) = (p.a[i], p.b[i]);
        if ai == 1 {
            format!("P^{}", bi)
        } else {
            format!("v_{}(P^{})", ai, bi)
        }
    };
    let inner: Vec<usize> = match c.kind {
        ComponentKind::PairOnes(i1, i2) => vec![i1 - 1, i2 - 1],
        ComponentKind::DoubleTwo(i) => vec![i - 1],
    };
    let sec_core = match c.kind {
        ComponentKind::PairOnes(i1, i2) => {
            format!("Sec({} x {})", factor(i1 - 1), factor(i2 - 1))
        }
        ComponentKind::DoubleTwo(i) => format!("Sec({})", factor(i - 1)),
    };
    let mut parts: Vec<String> = (0..p.k())
        .filter(|i| !inner.contains(i))
        .map(factor)
        .collect();
    parts.push(sec_core);
    Ok(parts.join(" x "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::DEFAULT_ENUM_BUDGET;

    fn sv(a: &[i64], b: &[i64]) -> SVParams {
        SVParams::new(a.to_vec(), b.to_vec()).unwrap()
    }

    fn components(a: &[i64], b: &[i64]) -> Vec<SingularComponent> {
        let p = sv(a, b);
        let poly = p.build_polytope(DEFAULT_ENUM_BUDGET).unwrap();
        singular_components(&poly, &p).unwrap()
    }

    #[test]
    fn vertex_cone_example_three_factor() {
        // a=(1,1,2), b=(1,1,1): the cone at 2e31 has rays
        // (1,1,1), (1,0,0), (0,1,0), (0,0,-1)
        let p = sv(&[1, 1, 2], &[1, 1, 1]);
        let poly = p.build_polytope(DEFAULT_ENUM_BUDGET).unwrap();
        let fan = normal_fan(&poly).unwrap();
        let cone = fan
            .iter()
            .find(|c| c.face_points == vec![vec![0, 0, 2]])
            .expect("vertex cone for 2e31");
        let rays: BTreeSet<Vec<BigInt>> = cone.rays.iter().cloned().collect();
        let expect: BTreeSet<Vec<BigInt>> = [
            vec![1, 1, 1],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, -1],
        ]
        .into_iter()
        .map(|v| v.into_iter().map(BigInt::from).collect())
        .collect();
        assert_eq!(rays, expect);
        assert!(!cone.smooth);
    }

    #[test]
    fn component_counts_examples() {
        assert!(components(&[1], &[4]).is_empty());
        assert!(components(&[2], &[3]).is_empty());
        assert!(components(&[3], &[2]).is_empty());
        assert!(components(&[1, 1], &[2, 2]).is_empty());
        assert!(components(&[2, 2], &[1, 1]).is_empty());
        assert_eq!(components(&[2, 2], &[1, 2]).len(), 1);
        assert_eq!(components(&[2, 2], &[2, 2]).len(), 2);
        assert_eq!(components(&[1, 1, 2], &[1, 1, 1]).len(), 1);
        assert_eq!(components(&[1, 2, 3], &[1, 1, 1]).len(), 1);
        assert_eq!(components(&[1, 1, 1], &[1, 1, 2]).len(), 1);
        assert!(components(&[1, 1, 1], &[1, 1, 1]).is_empty());
    }

    #[test]
    fn six_components_four_factor_instance() {
        // a=(1,1,1,1), b=(1,1,1,2): C(4,2) = 6 pair components
        let cs = components(&[1, 1, 1, 1], &[1, 1, 1, 2]);
        assert_eq!(cs.len(), 6);
        let kinds: BTreeSet<ComponentKind> = cs.iter().map(|c| c.kind).collect();
        let expect: BTreeSet<ComponentKind> = [
            ComponentKind::PairOnes(1, 2),
            ComponentKind::PairOnes(1, 3),
            ComponentKind::PairOnes(1, 4),
            ComponentKind::PairOnes(2, 3),
            ComponentKind::PairOnes(2, 4),
            ComponentKind::PairOnes(3, 4),
        ]
        .into_iter()
        .collect();
        assert_eq!(kinds, expect);
    }

    #[test]
    fn expected_counts_match_computed_on_small_grid() {
        for (a, b) in [
            (vec![1i64, 1, 1, 1], vec![1i64, 1, 1, 2]),
            (vec![1, 1, 2, 2], vec![1, 1, 1, 1]),
            (vec![1, 2, 2], vec![1, 1, 1]),
            (vec![2, 2, 2], vec![1, 1, 1]),
            (vec![1, 1, 2], vec![2, 1, 1]),
            (vec![1, 1, 1], vec![2, 2, 2]),
            (vec![2, 3], vec![2, 2]),
            (vec![2, 4], vec![1, 2]),
            (vec![3, 3], vec![2, 2]),
        ] {
            let p = sv(&a, &b);
            let poly = p.build_polytope(DEFAULT_ENUM_BUDGET).unwrap();
            let cs = singular_components(&poly, &p).unwrap();
            assert_eq!(
                cs.len() as u64,
                expected_component_count(&p),
                "count mismatch for {:?}/{:?}",
                a,
                b
            );
        }
    }

    #[test]
    fn vertex_status_closed_form_vs_fan() {
        for (a, b) in [
            (vec![1i64, 2], vec![2i64, 2]),
            (vec![2, 2], vec![1, 2]),
            (vec![1, 1, 2], vec![1, 1, 1]),
            (vec![1, 1, 1], vec![1, 1, 2]),
            (vec![1, 2, 3], vec![1, 1, 1]),
        ] {
            let p = sv(&a, &b);
            let poly = p.build_polytope(DEFAULT_ENUM_BUDGET).unwrap();
            let fan = normal_fan(&poly).unwrap();
            let verts: Vec<Vec<i64>> = poly.vertices();
            for pt in &poly.points {
                let st = expected_vertex_status(&p, pt).unwrap();
                assert_eq!(st.is_vertex, verts.contains(pt), "{:?} in {:?}/{:?}", pt, a, b);
                if st.is_vertex {
                    let cone = fan
                        .iter()
                        .find(|c| c.face_points == vec![pt.clone()])
                        .expect("vertex cone present");
                    assert_eq!(st.smooth, cone.smooth, "{:?} in {:?}/{:?}", pt, a, b);
                }
            }
        }
    }

    #[test]
    fn component_descriptions() {
        let p = sv(&[1, 2, 3], &[1, 1, 1]);
        let poly = p.build_polytope(DEFAULT_ENUM_BUDGET).unwrap();
        let cs = singular_components(&poly, &p).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].kind, ComponentKind::DoubleTwo(2));
        let d = describe_component(&p, &cs[0]).unwrap();
        assert_eq!(d, "P^1 x v_3(P^1) x Sec(v_2(P^1))");

        let p2 = sv(&[1, 1, 1, 1], &[1, 1, 1, 2]);
        let poly2 = p2.build_polytope(DEFAULT_ENUM_BUDGET).unwrap();
        let cs2 = singular_components(&poly2, &p2).unwrap();
        let c34 = cs2
            .iter()
            .find(|c| c.kind == ComponentKind::PairOnes(3, 4))
            .unwrap();
        let d2 = describe_component(&p2, c34).unwrap();
        assert_eq!(d2, "P^1 x P^1 x Sec(P^1 x P^2)");
    }
}
