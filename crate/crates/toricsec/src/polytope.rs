//! Lattice polytopes given by an explicit inequality system, with exact
//! enumeration of lattice points, face structure, and the cone over the
//! polytope in the lattice generated by its lifted lattice points.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{hnf, snf, IntMatrix, LatticeBasis};

pub const DEFAULT_ENUM_BUDGET: u128 = 10_000_000;
pub const MAX_FACETS_FOR_FACE_LATTICE: usize = 40;

#[derive(Debug, Error)]
pub enum PolytopeError {
    #[error("enumeration box has {cells} cells, over budget {budget}")]
    BudgetExceeded { cells: u128, budget: u128 },
    #[error("face lattice enumeration refused: {0} facets (limit {MAX_FACETS_FOR_FACE_LATTICE})")]
    TooManyFacets(usize),
    #[error("polytope has no lattice points")]
    Empty,
}

/// Label recording where an inequality came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum IneqLabel {
    /// sum of all coordinates >= 2
    LowerBoundF,
    /// cap on block i: sum of block coordinates <= a_i  (1-based factor index)
    CapR(usize),
    /// coordinate x_{i,j} >= 0 (1-based indices)
    NonNegZ(usize, usize),
    Other(String),
}

impl IneqLabel {
    pub fn display(&self) -> String {
        match self {
            IneqLabel::LowerBoundF => "F".into(),
            IneqLabel::CapR(i) => format!("R{}", i),
            IneqLabel::NonNegZ(i, j) => format!("Z{},{}", i, j),
            IneqLabel::Other(s) => s.clone(),
        }
    }
}

/// <normal, x> >= rhs
#[derive(Debug, Clone)]
pub struct Inequality {
    pub normal: Vec<i64>,
    pub rhs: i64,
    pub label: IneqLabel,
}

impl Inequality {
    pub fn eval(&self, p: &[i64]) -> i64 {
        self.normal.iter().zip(p).map(|(a, x)| a * x).sum::<i64>() - self.rhs
    }

    pub fn tight(&self, p: &[i64]) -> bool {
        self.eval(p) == 0
    }
}

#[derive(Debug, Clone)]
pub struct LatticePolytope {
    pub ambient_dim: usize,
    pub inequalities: Vec<Inequality>,
    pub bbox: Vec<(i64, i64)>,
    pub points: Vec<Vec<i64>>,
    /// memoized vertex set; vertices() fills it on first use
    verts: std::sync::OnceLock<Vec<Vec<i64>>>,
}

/// A face, identified by its lattice-point set.
#[derive(Debug, Clone)]
pub struct Face {
    /// indices of all inequalities tight on every point of the face
    pub tight_set: Vec<usize>,
    pub points: Vec<Vec<i64>>,
    pub dim: i64,
}

/// The cone over {1} x P inside the lattice generated by the lifted points.
#[derive(Debug, Clone)]
pub struct ConeData {
    /// lifted vertices (1, v) in ambient coordinates
    pub rays: Vec<Vec<i64>>,
    /// the same rays in coordinates of `lambda`
    pub rays_lambda: Vec<Vec<BigInt>>,
    pub lambda: LatticeBasis,
    /// primitive facet normals of the cone, in coordinates dual to `lambda`
    pub facet_normals_lambda: Vec<Vec<BigInt>>,
    /// for each facet normal, the inequality indices that homogenize to it
    pub facet_sources: Vec<Vec<usize>>,
}

/// Depth-first enumeration with per-inequality bound propagation: a partial
/// assignment is abandoned as soon as some inequality cannot be satisfied by
/// any completion within the box.  The budget caps visited search nodes.
pub fn enumerate_points(
    inequalities: &[Inequality],
    bbox: &[(i64, i64)],
    budget: u128,
) -> Result<Vec<Vec<i64>>, PolytopeError> {
    let mut out = Vec::new();
    enumerate_points_with(inequalities, bbox, budget, &mut |p| out.push(p.to_vec()))?;
    Ok(out)
}

/// Streaming variant of `enumerate_points`: calls `visit` on each point
/// instead of materializing the full list.
pub fn enumerate_points_with(
    inequalities: &[Inequality],
    bbox: &[(i64, i64)],
    budget: u128,
    visit: &mut dyn FnMut(&[i64]),
) -> Result<(), PolytopeError> {
    if bbox.iter().any(|&(lo, hi)| hi < lo) {
        return Ok(());
    }
    let n = bbox.len();
    if n == 0 {
        return Ok(());
    }
    // max_rem[i][j]: largest value coordinates j.. can add to inequality i
    let m = inequalities.len();
    let mut max_rem = vec![vec![0i64; n + 1]; m];
    for (i, iq) in inequalities.iter().enumerate() {
        for j in (0..n).rev() {
            let c = iq.normal[j];
            let best = (c * bbox[j].0).max(c * bbox[j].1);
            max_rem[i][j] = max_rem[i][j + 1] + best;
        }
    }
    // partial[i] tracks eval(prefix) = dot - rhs for the assigned prefix
    let mut partial: Vec<i64> = inequalities.iter().map(|iq| -iq.rhs).collect();
    let mut cur = vec![0i64; n];
    let mut nodes: u128 = 0;
    fn rec(
        j: usize,
        inequalities: &[Inequality],
        bbox: &[(i64, i64)],
        max_rem: &[Vec<i64>],
        partial: &mut Vec<i64>,
        cur: &mut Vec<i64>,
        visit: &mut dyn FnMut(&[i64]),
        nodes: &mut u128,
        budget: u128,
    ) -> Result<(), PolytopeError> {
        if (0..inequalities.len()).any(|i| partial[i] + max_rem[i][j] < 0) {
            return Ok(());
        }
        if j == bbox.len() {
            visit(cur);
            return Ok(());
        }
        for x in bbox[j].0..=bbox[j].1 {
            *nodes += 1;
            if *nodes > budget {
                return Err(PolytopeError::BudgetExceeded { cells: *nodes, budget });
            }
            cur[j] = x;
            for (i, iq) in inequalities.iter().enumerate() {
                partial[i] += iq.normal[j] * x;
            }
            rec(j + 1, inequalities, bbox, max_rem, partial, cur, visit, nodes, budget)?;
            for (i, iq) in inequalities.iter().enumerate() {
                partial[i] -= iq.normal[j] * x;
            }
        }
        Ok(())
    }
    rec(0, inequalities, bbox, &max_rem, &mut partial, &mut cur, visit, &mut nodes, budget)
}

/// Echelon-form accumulator for exact rank computations over small integers.
/// Rows are kept gcd-normalized so i128 never overflows for the entry sizes
/// appearing here.
pub struct RankAccum {
    cols: usize,
    rows: Vec<(usize, Vec<i128>)>, // (pivot col, row)
}

impl RankAccum {
    pub fn new(cols: usize) -> Self {
        RankAccum { cols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Returns true if the vector increased the rank.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (p, row) in &self.rows {
            if w[*p] != 0 {
                let a = row[*p];
                let b = w[*p];
                for j in 0..self.cols {
                    w[j] = w[j] * a - row[j] * b;
                }
                normalize(&mut w);
            }
        }
        match w.iter().position(|&x| x != 0) {
            None => false,
            Some(p) => {
                normalize(&mut w);
                self.rows.push((p, w));
                self.rows.sort_by_key(|(p, _)| *p);
                true
            }
        }
    }
}

fn normalize(v: &mut [i128]) {
    let mut g: i128 = 0;
    for &x in v.iter() {
        g = gcd_i128(g, x.abs());
        if g == 1 {
            return;
        }
    }
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Affine rank of a point set = dim of its affine hull (-1 for empty).
pub fn affine_dim(points: &[Vec<i64>]) -> i64 {
    if points.is_empty() {
        return -1;
    }
    let n = points[0].len();
    let base = &points[0];
    let mut acc = RankAccum::new(n);
    let mut diff = vec![0i64; n];
    for p in &points[1..] {
        for j in 0..n {
            diff[j] = p[j] - base[j];
        }
        acc.insert(&diff);
        if acc.rank() == n {
            break;
        }
    }
    acc.rank() as i64
}

impl LatticePolytope {
    pub fn new(
        ambient_dim: usize,
        inequalities: Vec<Inequality>,
        bbox: Vec<(i64, i64)>,
        budget: u128,
    ) -> Result<Self, PolytopeError> {
        assert_eq!(bbox.len(), ambient_dim);
        let points = enumerate_points(&inequalities, &bbox, budget)?;
        Ok(LatticePolytope {
            ambient_dim,
            inequalities,
            bbox,
            points,
            verts: std::sync::OnceLock::new(),
        })
    }

    /// Wraps an already-enumerated point set.
    pub fn from_points(
        ambient_dim: usize,
        inequalities: Vec<Inequality>,
        bbox: Vec<(i64, i64)>,
        points: Vec<Vec<i64>>,
    ) -> Self {
        assert_eq!(bbox.len(), ambient_dim);
        LatticePolytope {
            ambient_dim,
            inequalities,
            bbox,
            points,
            verts: std::sync::OnceLock::new(),
        }
    }

    pub fn dimension(&self) -> i64 {
        affine_dim(&self.points)
    }

    pub fn tight_indices(&self, p: &[i64]) -> Vec<usize> {
        (0..self.inequalities.len())
            .filter(|&i| self.inequalities[i].tight(p))
            .collect()
    }

    /// Inequalities tight on every lattice point.
    pub fn everywhere_tight(&self) -> Vec<usize> {
        (0..self.inequalities.len())
            .filter(|&i| self.points.iter().all(|p| self.inequalities[i].tight(p)))
            .collect()
    }

    /// Facets: faces of dimension dim(P) - 1, one per supporting inequality
    /// class.  Each face is the hull of the vertices of P it contains, so
    /// dimension, deduplication, and the tight-set closure all work on the
    /// (much smaller) vertex set; only the kept facets get their full lattice
    /// point lists.
    pub fn facets(&self) -> Vec<Face> {
        let d = self.dimension();
        if d < 1 {
            return vec![];
        }
        let verts = self.vertices();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        for i in 0..self.inequalities.len() {
            let tight_verts: Vec<usize> = (0..verts.len())
                .filter(|&v| self.inequalities[i].tight(&verts[v]))
                .collect();
            let vset: Vec<Vec<i64>> = tight_verts.iter().map(|&v| verts[v].clone()).collect();
            if affine_dim(&vset) != d - 1 {
                continue;
            }
            if seen.insert(tight_verts) {
                let tight_set = (0..self.inequalities.len())
                    .filter(|&j| vset.iter().all(|p| self.inequalities[j].tight(p)))
                    .collect();
                let points: Vec<Vec<i64>> = self
                    .points
                    .iter()
                    .filter(|p| self.inequalities[i].tight(p))
                    .cloned()
                    .collect();
                out.push(Face { tight_set, points, dim: d - 1 });
            }
        }
        out
    }

    /// Vertices.  A point is a vertex iff the inequalities tight at it have
    /// full rank (the inequality system here always cuts out the polytope
    /// exactly).  Cheap pre-filter: a point movable by +-e_j inside the point
    /// set is not a vertex.
    pub fn vertices(&self) -> Vec<Vec<i64>> {
        self.verts.get_or_init(|| self.compute_vertices()).clone()
    }

    /// Packed key per point when every coordinate fits in 7 bits after an
    /// offset shift and there are at most 18 coordinates.
    fn packed_keys(&self) -> Option<(Vec<u128>, Vec<i64>)> {
        let n = self.ambient_dim;
        if n == 0 || n > 18 {
            return None;
        }
        let offs: Vec<i64> = self.bbox.iter().map(|&(lo, _)| lo - 1).collect();
        if self.bbox.iter().any(|&(lo, hi)| hi - lo + 3 > 127) {
            return None;
        }
        let pack = |p: &[i64]| {
            let mut key: u128 = 0;
            for (x, o) in p.iter().zip(&offs) {
                key = (key << 7) | (x - o) as u128;
            }
            key
        };
        Some((self.points.iter().map(|p| pack(p)).collect(), offs))
    }

    fn compute_vertices(&self) -> Vec<Vec<i64>> {
        let n = self.ambient_dim;
        let candidates: Vec<usize> = match self.packed_keys() {
            Some((keys, _)) => {
                let set: HashSet<u128> = keys.iter().copied().collect();
                let mut out = Vec::new();
                'pt: for (i, &key) in keys.iter().enumerate() {
                    for j in 0..n {
                        // +-1 in coordinate j shifts the packed key by one
                        // unit in its 7-bit field
                        let unit: u128 = 1 << (7 * (n - 1 - j));
                        if set.contains(&(key + unit)) && set.contains(&(key - unit)) {
                            continue 'pt;
                        }
                    }
                    out.push(i);
                }
                out
            }
            None => {
                let set: HashSet<&[i64]> = self.points.iter().map(|p| p.as_slice()).collect();
                let mut out = Vec::new();
                let mut probe = vec![0i64; n];
                'point: for (i, p) in self.points.iter().enumerate() {
                    for j in 0..n {
                        probe.copy_from_slice(p);
                        probe[j] += 1;
                        if !set.contains(probe.as_slice()) {
                            continue;
                        }
                        probe[j] -= 2;
                        if set.contains(probe.as_slice()) {
                            continue 'point;
                        }
                    }
                    out.push(i);
                }
                out
            }
        };
        let mut out = Vec::new();
        for i in candidates {
            let p = &self.points[i];
            let mut acc = RankAccum::new(n);
            for iq in &self.inequalities {
                if iq.tight(p) {
                    acc.insert(&iq.normal);
                    if acc.rank() == n {
                        break;
                    }
                }
            }
            if acc.rank() == n {
                out.push(p.clone());
            }
        }
        out
    }

    /// All nonempty faces (including P itself and the vertices), as the
    /// closure of the facet set under intersection.
    pub fn faces(&self) -> Result<Vec<Face>, PolytopeError> {
        let facets = self.facets();
        if facets.len() > MAX_FACETS_FOR_FACE_LATTICE {
            return Err(PolytopeError::TooManyFacets(facets.len()));
        }
        let mut by_points: BTreeMap<Vec<Vec<i64>>, ()> = BTreeMap::new();
        by_points.insert(self.points.clone(), ());
        let facet_sets: Vec<BTreeSet<Vec<i64>>> =
            facets.iter().map(|f| f.points.iter().cloned().collect()).collect();
        let mut work: Vec<Vec<Vec<i64>>> = facets.iter().map(|f| f.points.clone()).collect();
        for w in &work {
            by_points.insert(w.clone(), ());
        }
        while let Some(cur) = work.pop() {
            for fs in &facet_sets {
                let inter: Vec<Vec<i64>> =
                    cur.iter().filter(|p| fs.contains(*p)).cloned().collect();
                if inter.is_empty() || by_points.contains_key(&inter) {
                    continue;
                }
                by_points.insert(inter.clone(), ());
                work.push(inter);
            }
        }
        let mut out: Vec<Face> = by_points
            .keys()
            .map(|pts| {
                let tight_set = (0..self.inequalities.len())
                    .filter(|&j| pts.iter().all(|p| self.inequalities[j].tight(p)))
                    .collect();
                Face { tight_set, points: pts.clone(), dim: affine_dim(pts) }
            })
            .collect();
        out.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.points.cmp(&b.points)));
        Ok(out)
    }

    /// Cone over {1} x P in the lattice generated by the lifted lattice points.
    pub fn cone_data(&self) -> Result<ConeData, PolytopeError> {
        if self.points.is_empty() {
            return Err(PolytopeError::Empty);
        }
        let m = self.ambient_dim + 1;
        let lambda = LatticeBasis::from_i64_generators(
            m,
            self.points
                .iter()
                .map(|p| std::iter::once(1i64).chain(p.iter().copied()).collect()),
        );
        let rank = lambda.rank();
        let verts = if self.points.len() == 1 { self.points.clone() } else { self.vertices() };
        let rays: Vec<Vec<i64>> = verts
            .iter()
            .map(|v| std::iter::once(1i64).chain(v.iter().copied()).collect())
            .collect();
        let rays_lambda: Vec<Vec<BigInt>> = rays
            .iter()
            .map(|r| {
                let rb: Vec<BigInt> = r.iter().map(|&x| BigInt::from(x)).collect();
                lambda.express(&rb).expect("lifted vertex lies in the point lattice")
            })
            .collect();
        // candidate facet normals: homogenized defining inequalities
        let mut normals: Vec<Vec<BigInt>> = Vec::new();
        let mut sources: Vec<Vec<usize>> = Vec::new();
        for (idx, iq) in self.inequalities.iter().enumerate() {
            let u: Vec<BigInt> = std::iter::once(BigInt::from(-iq.rhs))
                .chain(iq.normal.iter().map(|&x| BigInt::from(x)))
                .collect();
            let w = lambda.dual_coords(&u);
            if w.iter().all(|x| x.is_zero()) {
                continue;
            }
            let w = crate::exact::primitive_from_rational(
                &w.iter().map(|x| crate::exact::Rat::from(x.clone())).collect::<Vec<_>>(),
            );
            // tight rays must span a hyperplane of the cone
            let tight: Vec<&Vec<BigInt>> = rays_lambda
                .iter()
                .filter(|r| {
                    r.iter().zip(&w).map(|(a, b)| a * b).sum::<BigInt>().is_zero()
                })
                .collect();
            if tight.is_empty() {
                continue;
            }
            let tight_rank = integer_rank(&tight);
            if tight_rank != rank - 1 {
                continue;
            }
            if let Some(pos) = normals.iter().position(|n| *n == w) {
                sources[pos].push(idx);
            } else {
                normals.push(w);
                sources.push(vec![idx]);
            }
        }
        Ok(ConeData {
            rays,
            rays_lambda,
            lambda,
            facet_normals_lambda: normals,
            facet_sources: sources,
        })
    }

    /// Lattice points of the dilation s*P.
    pub fn dilate_points(&self, s: i64, budget: u128) -> Result<Vec<Vec<i64>>, PolytopeError> {
        assert!(s >= 1);
        let ineqs: Vec<Inequality> = self
            .inequalities
            .iter()
            .map(|iq| Inequality { normal: iq.normal.clone(), rhs: iq.rhs * s, label: iq.label.clone() })
            .collect();
        let bbox: Vec<(i64, i64)> = self.bbox.iter().map(|&(lo, hi)| (lo * s, hi * s)).collect();
        enumerate_points(&ineqs, &bbox, budget)
    }

    /// Streaming version of `dilate_points`; avoids materializing large
    /// dilations.
    pub fn dilate_for_each(
        &self,
        s: i64,
        budget: u128,
        visit: &mut dyn FnMut(&[i64]),
    ) -> Result<(), PolytopeError> {
        assert!(s >= 1);
        let ineqs: Vec<Inequality> = self
            .inequalities
            .iter()
            .map(|iq| Inequality { normal: iq.normal.clone(), rhs: iq.rhs * s, label: iq.label.clone() })
            .collect();
        let bbox: Vec<(i64, i64)> = self.bbox.iter().map(|&(lo, hi)| (lo * s, hi * s)).collect();
        enumerate_points_with(&ineqs, &bbox, budget, visit)
    }
}

/// Smoothness of a (pointed, simplicial) cone given by primitive rays in some
/// lattice's coordinates: the rays must be linearly independent and extend to
/// a basis, i.e. their Smith form is all ones.
/// Rank of a set of BigInt rows, through the i64 accumulator when entries
/// fit and the exact matrix otherwise.
fn integer_rank(rows: &[&Vec<BigInt>]) -> usize {
    let small: Option<Vec<Vec<i64>>> = rows
        .iter()
        .map(|r| r.iter().map(i64::try_from).collect::<Result<_, _>>().ok())
        .collect();
    match small {
        Some(small) if !small.is_empty() => {
            let mut acc = RankAccum::new(small[0].len());
            for r in &small {
                acc.insert(r);
            }
            acc.rank()
        }
        _ => IntMatrix::from_rows(rows.iter().map(|r| (*r).clone()).collect()).rank(),
    }
}

pub fn cone_smooth(rays: &[Vec<BigInt>]) -> bool {
    if rays.is_empty() {
        return true;
    }
    if let Some(ans) = cone_smooth_i128(rays) {
        return ans;
    }
    let m = IntMatrix::from_rows(rays.to_vec());
    let (h, _) = hnf(&m);
    let rank = (0..h.rows).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count();
    if rank != rays.len() {
        return false;
    }
    snf(&m).iter().all(|d| d.is_one())
}

/// Fast path for cone_smooth: checked-i128 Euclidean row reduction.  Decides
/// rank deficiency (not smooth) and all-unit pivots (smooth, since the pivot
/// minor is then unimodular); anything else falls back to the exact route.
fn cone_smooth_i128(rays: &[Vec<BigInt>]) -> Option<bool> {
    let mut m: Vec<Vec<i128>> = rays
        .iter()
        .map(|r| r.iter().map(i128::try_from).collect::<Result<_, _>>().ok())
        .collect::<Option<_>>()?;
    let ncols = m[0].len();
    let mut r = 0usize;
    let mut unit_pivots = true;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let piv = (r..m.len())
                .filter(|&i| m[i][c] != 0)
                .min_by_key(|&i| m[i][c].unsigned_abs());
            let Some(piv) = piv else { break };
            m.swap(r, piv);
            let mut clean = true;
            for i in r + 1..m.len() {
                if m[i][c] == 0 {
                    continue;
                }
                let q = m[i][c] / m[r][c];
                for j in c..ncols {
                    let s = q.checked_mul(m[r][j])?;
                    m[i][j] = m[i][j].checked_sub(s)?;
                }
                if m[i][c] != 0 {
                    clean = false;
                }
            }
            if clean {
                if m[r][c].unsigned_abs() != 1 {
                    unit_pivots = false;
                }
                r += 1;
                break;
            }
        }
    }
    if r != m.len() {
        return Some(false);
    }
    if unit_pivots {
        Some(true)
    } else {
        None
    }
}
