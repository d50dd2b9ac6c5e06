//! The lattice polytope P(a,b) attached to a Segre-Veronese secant, its
//! inequality system, and the closed-form facet classification with an
//! independent polyhedral cross-check.

use serde::Serialize;
use thiserror::Error;

use crate::polytope::{Inequality, IneqLabel, LatticePolytope, PolytopeError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("a and b must have the same positive length")]
    BadShape,
    #[error("all entries of a and b must be >= 1")]
    NonPositive,
}

/// Parameters (a, b) of a Segre-Veronese variety, stored canonically with the
/// factor pairs (a_i, b_i) sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SVParams {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

impl SVParams {
    pub fn new(a: Vec<i64>, b: Vec<i64>) -> Result<Self, ParamError> {
        if a.is_empty() || a.len() != b.len() {
            return Err(ParamError::BadShape);
        }
        if a.iter().chain(&b).any(|&x| x < 1) {
            return Err(ParamError::NonPositive);
        }
        let mut pairs: Vec<(i64, i64)> = a.into_iter().zip(b).collect();
        pairs.sort();
        Ok(SVParams {
            a: pairs.iter().map(|p| p.0).collect(),
            b: pairs.iter().map(|p| p.1).collect(),
        })
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    /// Ambient coordinate count n = sum b_i.
    pub fn n(&self) -> usize {
        self.b.iter().map(|&x| x as usize).sum()
    }

    /// (block, slot) layout of the n ambient coordinates, 1-based.
    pub fn layout(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n());
        for (i, &bi) in self.b.iter().enumerate() {
            for j in 0..bi as usize {
                out.push((i + 1, j + 1));
            }
        }
        out
    }

    /// Offset of block i (0-based) into the coordinate vector.
    pub fn block_offset(&self, i: usize) -> usize {
        self.b[..i].iter().map(|&x| x as usize).sum()
    }

    pub fn inequalities(&self) -> Vec<Inequality> {
        let n = self.n();
        let mut out = Vec::with_capacity(1 + self.k() + n);
        out.push(Inequality { normal: vec![1; n], rhs: 2, label: IneqLabel::LowerBoundF });
        for i in 0..self.k() {
            let off = self.block_offset(i);
            let mut nm = vec![0i64; n];
            for j in 0..self.b[i] as usize {
                nm[off + j] = -1;
            }
            out.push(Inequality { normal: nm, rhs: -self.a[i], label: IneqLabel::CapR(i + 1) });
        }
        for (idx, (i, j)) in self.layout().into_iter().enumerate() {
            let mut nm = vec![0i64; n];
            nm[idx] = 1;
            out.push(Inequality { normal: nm, rhs: 0, label: IneqLabel::NonNegZ(i, j) });
        }
        out
    }

    pub fn bbox(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::with_capacity(self.n());
        for (i, &bi) in self.b.iter().enumerate() {
            for _ in 0..bi {
                out.push((0, self.a[i]));
            }
        }
        out
    }

    /// Builds P(a,b) using the product structure: the points are tuples of
    /// per-block simplex points with total degree >= 2, so enumeration costs
    /// the number of degree-<=a tuples rather than a bounding-box scan. The
    /// budget caps that tuple count. Output order matches the lexicographic
    /// odometer order of the generic enumerator.
    pub fn build_polytope(&self, budget: u128) -> Result<LatticePolytope, PolytopeError> {
        let mut blocks: Vec<Vec<Vec<i64>>> = Vec::with_capacity(self.k());
        let mut cells: u128 = 1;
        for (&ai, &bi) in self.a.iter().zip(&self.b) {
            let pts = simplex_points(ai, bi as usize);
            cells = cells.saturating_mul(pts.len() as u128);
            if cells > budget {
                return Err(PolytopeError::BudgetExceeded { cells, budget });
            }
            blocks.push(pts);
        }
        let mut points: Vec<Vec<i64>> = Vec::new();
        let mut idx = vec![0usize; self.k()];
        'outer: loop {
            let mut p: Vec<i64> = Vec::with_capacity(self.n());
            let mut total = 0i64;
            for (bl, &i) in blocks.iter().zip(&idx) {
                p.extend_from_slice(&bl[i]);
                total += bl[i].iter().sum::<i64>();
            }
            if total >= 2 {
                points.push(p);
            }
            for j in (0..idx.len()).rev() {
                if idx[j] + 1 < blocks[j].len() {
                    idx[j] += 1;
                    for l in j + 1..idx.len() {
                        idx[l] = 0;
                    }
                    continue 'outer;
                }
            }
            break;
        }
        Ok(LatticePolytope::from_points(
            self.n(),
            self.inequalities(),
            self.bbox(),
            points,
        ))
    }

    /// Number of lattice points of P(a,b): monomials of total degree >= 2
    /// within the per-block degree caps.
    pub fn point_count(&self) -> u128 {
        let mut total: u128 = 1;
        for (&ai, &bi) in self.a.iter().zip(&self.b) {
            total = total.saturating_mul(binomial((ai + bi) as u128, bi as u128));
        }
        total.saturating_sub(1 + self.n() as u128)
    }
}

/// Lattice points of {x in Z^b, x >= 0, sum x <= a}, in ascending
/// lexicographic order.
fn simplex_points(a: i64, b: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; b];
    fn rec(a: i64, j: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if j == cur.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..=a {
            cur[j] = x;
            rec(a - x, j + 1, cur, out);
        }
        cur[j] = 0;
    }
    rec(a, 0, &mut cur, &mut out);
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// Dimension regime of P(a,b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DimCase {
    /// dim P = n
    Full,
    /// two factors with a = (1,1): P = F has dim n - 2
    D1,
    /// one factor, a = 1: P is empty
    D2Empty,
    /// one factor, a = 2, b = 1: P is a single point
    D2Point,
    /// one factor, a = 2, b >= 2: P spans a hyperplane, dim n - 1
    D2Hyperplane,
}

/// Reason a coordinate hyperplane Z_{i,j} fails to be a facet in the
/// full-dimensional regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExceptionTag {
    /// k = 3, b_i = 1, a_j = 1 for all j != i
    E1,
    /// k = 2, b_1 = 1, a_1 <= 2, a_2 = 2
    E2,
    /// k = 2, b_2 = 1, a_1 <= 2, a_2 >= 2
    E3,
    /// k = 1, b = 1, a >= 3
    E4,
}

#[derive(Debug, Clone, Serialize)]
pub struct FacetReport {
    pub dim_case: DimCase,
    pub dim: i64,
    /// labels of the facets of P
    pub facets: Vec<IneqLabel>,
    /// Z_{i,j} hyperplanes (1-based) that are not facets despite full dim
    pub missing_z: Vec<(usize, usize, ExceptionTag)>,
}

/// Closed-form facet classification.
pub fn expected_facet_report(p: &SVParams) -> FacetReport {
    let k = p.k();
    let n = p.n() as i64;
    let (a, b) = (&p.a, &p.b);
    if k == 2 && a[0] == 1 && a[1] == 1 {
        // P = F: the polytope is a product of simplices inside F
        let facets = if b[0] == 1 && b[1] == 1 {
            vec![] // a single point
        } else {
            p.layout()
                .into_iter()
                .filter(|&(i, _)| b[i - 1] > 1)
                .map(|(i, j)| IneqLabel::NonNegZ(i, j))
                .collect()
        };
        return FacetReport { dim_case: DimCase::D1, dim: n - 2, facets, missing_z: vec![] };
    }
    if k == 1 {
        if a[0] == 1 {
            return FacetReport { dim_case: DimCase::D2Empty, dim: -1, facets: vec![], missing_z: vec![] };
        }
        if a[0] == 2 && b[0] == 1 {
            return FacetReport { dim_case: DimCase::D2Point, dim: 0, facets: vec![], missing_z: vec![] };
        }
        if a[0] == 2 {
            let facets = p
                .layout()
                .into_iter()
                .map(|(i, j)| IneqLabel::NonNegZ(i, j))
                .collect();
            return FacetReport { dim_case: DimCase::D2Hyperplane, dim: n - 1, facets, missing_z: vec![] };
        }
    }
    // full-dimensional regime
    let mut missing: Vec<(usize, usize, ExceptionTag)> = Vec::new();
    match k {
        1 => {
            if b[0] == 1 && a[0] >= 3 {
                missing.push((1, 1, ExceptionTag::E4));
            }
        }
        2 => {
            if b[0] == 1 && a[0] <= 2 && a[1] == 2 {
                missing.push((1, 1, ExceptionTag::E2));
            }
            if b[1] == 1 && a[0] <= 2 && a[1] >= 2 {
                missing.push((2, 1, ExceptionTag::E3));
            }
        }
        3 => {
            for i in 0..3 {
                if b[i] == 1 && (0..3).all(|j| j == i || a[j] == 1) {
                    missing.push((i + 1, 1, ExceptionTag::E1));
                }
            }
        }
        _ => {}
    }
    let mut facets: Vec<IneqLabel> = vec![IneqLabel::LowerBoundF];
    for i in 0..k {
        facets.push(IneqLabel::CapR(i + 1));
    }
    for (i, j) in p.layout() {
        if !missing.iter().any(|&(mi, mj, _)| (mi, mj) == (i, j)) {
            facets.push(IneqLabel::NonNegZ(i, j));
        }
    }
    FacetReport { dim_case: DimCase::Full, dim: n, facets, missing_z: missing }
}

#[derive(Debug, Clone, Serialize)]
pub struct FacetCheck {
    pub agree: bool,
    pub expected: FacetReport,
    pub computed_dim: i64,
    pub computed_facets: Vec<IneqLabel>,
    pub computed_points: usize,
}

/// Compare the closed-form facet classification against brute-force polyhedral
/// computation on the enumerated polytope.
pub fn cross_check_facets(p: &SVParams, budget: u128) -> Result<FacetCheck, PolytopeError> {
    let poly = p.build_polytope(budget)?;
    Ok(cross_check_facets_on(p, &poly))
}

/// Same check against an already-built polytope.
pub fn cross_check_facets_on(p: &SVParams, poly: &LatticePolytope) -> FacetCheck {
    let expected = expected_facet_report(p);
    let computed_dim = poly.dimension();
    let mut computed_facets: Vec<IneqLabel> = Vec::new();
    let everywhere = poly.everywhere_tight();
    for f in poly.facets() {
        // in every regime each facet here is supported by inequalities that
        // are not tight on all of P; all its supports get recorded
        for &i in &f.tight_set {
            if !everywhere.contains(&i) {
                computed_facets.push(poly.inequalities[i].label.clone());
            }
        }
    }
    computed_facets.sort();
    computed_facets.dedup();
    let mut expected_sorted = expected.facets.clone();
    expected_sorted.sort();
    let agree = computed_dim == expected.dim
        && computed_facets == expected_sorted
        && poly.points.len() as u128 == p.point_count();
    FacetCheck {
        agree,
        expected,
        computed_dim,
        computed_facets,
        computed_points: poly.points.len(),
    }
}
