//! Exact integer/rational linear algebra: Hermite and Smith normal forms,
//! affine solving over Q, and integer points of rational affine sets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.at(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * other.at(l, j);
                    *out.at_mut(i, j) += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self.at(i, c).clone();
            *self.at_mut(i, c) = v;
        }
    }

    /// row_i -= q * row_j
    fn row_sub_mul(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let d = q * self.at(j, c);
            *self.at_mut(i, c) -= d;
        }
    }

    pub fn rank(&self) -> usize {
        let (h, _) = hnf(self);
        (0..h.rows).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
    }
}

/// Row-style Hermite normal form.  Returns (H, U) with U unimodular, U*M = H,
/// pivots positive, entries above each pivot reduced into [0, pivot).
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pr = 0usize;
    for pc in 0..m.cols {
        if pr >= h.rows {
            break;
        }
        loop {
            // pick smallest nonzero |entry| in column pc among rows pr..
            let mut best: Option<usize> = None;
            for r in pr..h.rows {
                if !h.at(r, pc).is_zero()
                    && best.map_or(true, |b| h.at(r, pc).abs() < h.at(b, pc).abs())
                {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(pr, b);
            u.swap_rows(pr, b);
            let mut clean = true;
            for r in pr + 1..h.rows {
                if h.at(r, pc).is_zero() {
                    continue;
                }
                let q = h.at(r, pc) / h.at(pr, pc);
                h.row_sub_mul(r, pr, &q);
                u.row_sub_mul(r, pr, &q);
                if !h.at(r, pc).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.at(pr, pc).is_zero() {
            continue;
        }
        if h.at(pr, pc).is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
        }
        for r in 0..pr {
            let q = h.at(r, pc).div_floor(h.at(pr, pc));
            h.row_sub_mul(r, pr, &q);
            u.row_sub_mul(r, pr, &q);
        }
        pr += 1;
    }
    (h, u)
}

/// Smith normal form invariant factors (positive, each dividing the next).
pub fn snf(m: &IntMatrix) -> Vec<BigInt> {
    let mut w = m.clone();
    let mut t = 0usize;
    let end = w.rows.min(w.cols);
    while t < end {
        // locate smallest nonzero |entry| in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..w.rows {
            for j in t..w.cols {
                if !w.at(i, j).is_zero()
                    && best.map_or(true, |(bi, bj)| w.at(i, j).abs() < w.at(bi, bj).abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        w.swap_rows(t, bi);
        swap_cols(&mut w, t, bj);
        // clear row and column t
        let mut dirty = false;
        for i in t + 1..w.rows {
            if w.at(i, t).is_zero() {
                continue;
            }
            let q = w.at(i, t) / w.at(t, t);
            w.row_sub_mul(i, t, &q);
            if !w.at(i, t).is_zero() {
                dirty = true;
            }
        }
        for j in t + 1..w.cols {
            if w.at(t, j).is_zero() {
                continue;
            }
            let q = w.at(t, j) / w.at(t, t);
            col_sub_mul(&mut w, j, t, &q);
            if !w.at(t, j).is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        // pivot must divide every remaining entry
        let mut fixed = true;
        'scan: for i in t + 1..w.rows {
            for j in t + 1..w.cols {
                if !(w.at(i, j) % w.at(t, t)).is_zero() {
                    for c in 0..w.cols {
                        let v = w.at(i, c).clone();
                        *w.at_mut(t, c) += v;
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        if w.at(t, t).is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    (0..t).map(|i| w.at(i, i).clone()).collect()
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows {
        let x = m.at(i, a).clone();
        let y = m.at(i, b).clone();
        *m.at_mut(i, a) = y;
        *m.at_mut(i, b) = x;
    }
}

/// col_j -= q * col_t
fn col_sub_mul(m: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..m.rows {
        let d = q * m.at(i, t);
        *m.at_mut(i, j) -= d;
    }
}

/// Solve A x = rhs over Q.  Returns (particular, kernel basis) or None if
/// inconsistent.  Free variables are set to 0 in the particular solution.
pub fn solve_affine(a: &IntMatrix, rhs: &[BigInt]) -> Option<(Vec<Rat>, Vec<Vec<Rat>>)> {
    assert_eq!(a.rows, rhs.len());
    let rows = a.rows;
    let cols = a.cols;
    let mut m: Vec<Vec<Rat>> = (0..rows)
        .map(|i| {
            let mut r: Vec<Rat> =
                (0..cols).map(|j| Rat::from(a.at(i, j).clone())).collect();
            r.push(Rat::from(rhs[i].clone()));
            r
        })
        .collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut pr = 0usize;
    for pc in 0..cols {
        let Some(sel) = (pr..rows).find(|&r| !m[r][pc].is_zero()) else {
            continue;
        };
        m.swap(pr, sel);
        let inv = m[pr][pc].clone();
        for c in pc..=cols {
            let v = &m[pr][c] / &inv;
            m[pr][c] = v;
        }
        for r in 0..rows {
            if r != pr && !m[r][pc].is_zero() {
                let f = m[r][pc].clone();
                for c in pc..=cols {
                    let v = &m[r][c] - &f * &m[pr][c];
                    m[r][c] = v;
                }
            }
        }
        pivot_cols.push(pc);
        pr += 1;
        if pr == rows {
            break;
        }
    }
    for r in pr..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    let mut particular = vec![Rat::zero(); cols];
    for (i, &pc) in pivot_cols.iter().enumerate() {
        particular[pc] = m[i][cols].clone();
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let kernel: Vec<Vec<Rat>> = free
        .iter()
        .map(|&fc| {
            let mut v = vec![Rat::zero(); cols];
            v[fc] = Rat::one();
            for (i, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -m[i][fc].clone();
            }
            v
        })
        .collect();
    Some((particular, kernel))
}

/// Basis of a sublattice of Z^ambient, stored as HNF rows without zero rows.
#[derive(Debug, Clone)]
pub struct LatticeBasis {
    pub ambient: usize,
    basis: IntMatrix,
    pivots: Vec<usize>,
}

/// Membership of `g` in the lattice spanned by HNF rows with the given pivot
/// columns, in checked i128 arithmetic; None when a value does not fit.
fn in_span_i128(basis: &[(usize, Vec<i128>)], g: &[BigInt]) -> Option<bool> {
    let w: Vec<i128> = g.iter().map(i128::try_from).collect::<Result<_, _>>().ok()?;
    in_span_i128_vals(basis, w)
}

fn in_span_i128_vals(basis: &[(usize, Vec<i128>)], mut w: Vec<i128>) -> Option<bool> {
    for (p, row) in basis {
        if w[*p] == 0 {
            continue;
        }
        if w[*p] % row[*p] != 0 {
            return Some(false);
        }
        let q = w[*p] / row[*p];
        for (wj, rj) in w.iter_mut().zip(row) {
            *wj = wj.checked_sub(q.checked_mul(*rj)?)?;
        }
    }
    Some(w.iter().all(|&x| x == 0))
}

/// Incremental reduction state shared by the `LatticeBasis` constructors:
/// generators already in the running lattice are skipped by a cheap i128
/// containment test; the rest accumulate and trigger a small re-HNF, so the
/// basis never exceeds `ambient` rows no matter how many generators arrive.
struct BasisAccum {
    chunk: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    fast: Option<Vec<(usize, Vec<i128>)>>,
    pending: Vec<Vec<BigInt>>,
}

impl BasisAccum {
    fn new(ambient: usize) -> Self {
        BasisAccum {
            chunk: (4 * ambient).max(16),
            rows: Vec::new(),
            pivots: Vec::new(),
            fast: Some(Vec::new()),
            pending: Vec::new(),
        }
    }

    fn push(&mut self, g: Vec<BigInt>) {
        let ambient = g.len();
        self.pending.push(g);
        if self.pending.len() >= self.chunk {
            self.rebuild(ambient);
        }
    }

    fn rebuild(&mut self, ambient: usize) {
        let mut stack = self.rows.clone();
        stack.append(&mut self.pending);
        let (h, _) = hnf(&IntMatrix::from_rows(stack));
        self.rows.clear();
        self.pivots.clear();
        for i in 0..h.rows {
            if let Some(p) = (0..ambient).find(|&j| !h.at(i, j).is_zero()) {
                self.rows.push(h.row(i).to_vec());
                self.pivots.push(p);
            }
        }
        self.fast = self
            .rows
            .iter()
            .zip(self.pivots.iter())
            .map(|(r, &p)| {
                r.iter()
                    .map(|x| i128::try_from(x).ok())
                    .collect::<Option<Vec<i128>>>()
                    .map(|v| (p, v))
            })
            .collect();
    }

    fn finish(mut self, ambient: usize) -> LatticeBasis {
        if !self.pending.is_empty() {
            self.rebuild(ambient);
        }
        LatticeBasis {
            ambient,
            basis: IntMatrix::from_rows(self.rows),
            pivots: self.pivots,
        }
    }
}

impl LatticeBasis {
    pub fn from_generators(ambient: usize, gens: &[Vec<BigInt>]) -> Self {
        assert!(gens.iter().all(|g| g.len() == ambient));
        if gens.is_empty() {
            return LatticeBasis { ambient, basis: IntMatrix::zero(0, ambient), pivots: vec![] };
        }
        let mut acc = BasisAccum::new(ambient);
        for g in gens {
            if acc.fast.as_ref().and_then(|f| in_span_i128(f, g)) == Some(true) {
                continue;
            }
            acc.push(g.clone());
        }
        acc.finish(ambient)
    }

    /// Like `from_generators` for machine-integer vectors, streamed to avoid
    /// materializing the generator list in big-integer form.
    pub fn from_i64_generators<I>(ambient: usize, gens: I) -> Self
    where
        I: IntoIterator<Item = Vec<i64>>,
    {
        let mut acc = BasisAccum::new(ambient);
        for g in gens {
            assert_eq!(g.len(), ambient);
            if let Some(f) = &acc.fast {
                let w: Vec<i128> = g.iter().map(|&x| x as i128).collect();
                if in_span_i128_vals(f, w) == Some(true) {
                    continue;
                }
            }
            acc.push(g.iter().map(|&x| BigInt::from(x)).collect());
        }
        acc.finish(ambient)
    }

    pub fn standard(ambient: usize) -> Self {
        LatticeBasis {
            ambient,
            basis: IntMatrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    pub fn basis_rows(&self) -> Vec<Vec<BigInt>> {
        self.basis.rows_vec()
    }

    pub fn basis_matrix(&self) -> &IntMatrix {
        &self.basis
    }

    /// Coordinates of v in this basis, or None if v is not in the lattice.
    pub fn express(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        let mut coeffs = vec![BigInt::zero(); self.rank()];
        for (i, &p) in self.pivots.iter().enumerate() {
            let piv = self.basis.at(i, p);
            let (q, r) = w[p].div_rem(piv);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for j in 0..self.ambient {
                    let d = &q * self.basis.at(i, j);
                    w[j] -= d;
                }
            }
            coeffs[i] = q;
        }
        if w.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(coeffs)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.express(v).is_some()
    }

    /// From coordinates in this basis back to ambient coordinates.
    pub fn to_ambient(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.rank());
        let mut out = vec![BigInt::zero(); self.ambient];
        for i in 0..self.rank() {
            for j in 0..self.ambient {
                let d = &coords[i] * self.basis.at(i, j);
                out[j] += d;
            }
        }
        out
    }

    /// Pairing of an ambient functional with each basis vector: the coordinates
    /// of the restricted functional in the basis dual to this one.
    pub fn dual_coords(&self, functional: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(functional.len(), self.ambient);
        (0..self.rank())
            .map(|i| (0..self.ambient).map(|j| &functional[j] * self.basis.at(i, j)).sum())
            .collect()
    }

    /// Whether the lattice is all of Z^ambient restricted to its span, i.e.
    /// the generators generate a saturated (primitive) sublattice.
    pub fn is_saturated(&self) -> bool {
        snf(&self.basis).iter().all(|d| d.is_one())
    }
}

fn clear_denominators(v: &[Rat]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

fn primitive_bigint(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Express a rational functional as a primitive integer vector (scaled by a
/// positive rational).
pub fn primitive_from_rational(v: &[Rat]) -> Vec<BigInt> {
    primitive_bigint(&clear_denominators(v))
}

/// Find an integer combination z of the rows of H (in echelon form from hnf)
/// with z * H_nonzero = v; returns coefficients against all rows of h.
fn express_in_hnf_rows(h: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut w = v.to_vec();
    let mut coeffs = vec![BigInt::zero(); h.rows];
    for i in 0..h.rows {
        let Some(p) = (0..h.cols).find(|&j| !h.at(i, j).is_zero()) else {
            continue;
        };
        let (q, r) = w[p].div_rem(h.at(i, p));
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for j in 0..h.cols {
                let d = &q * h.at(i, j);
                w[j] -= d;
            }
        }
        coeffs[i] = q;
    }
    if w.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(coeffs)
}

/// Point of `lattice` inside the affine set particular + span(kernel), if any.
pub fn lattice_point_in_affine_set(
    particular: &[Rat],
    kernel: &[Vec<Rat>],
    lattice: &LatticeBasis,
) -> Option<Vec<BigInt>> {
    let m = particular.len();
    assert_eq!(lattice.ambient, m);
    // rows spanning the orthogonal complement of the kernel directions; the
    // affine set is then exactly { x : E x = E p }.
    let e_rows: Vec<Vec<BigInt>> = if kernel.is_empty() {
        (0..m)
            .map(|i| {
                let mut r = vec![BigInt::zero(); m];
                r[i] = BigInt::one();
                r
            })
            .collect()
    } else {
        let k_int = IntMatrix::from_rows(kernel.iter().map(|v| clear_denominators(v)).collect());
        let (_, null) = solve_affine(&k_int, &vec![BigInt::zero(); k_int.rows])
            .expect("homogeneous system is consistent");
        null.iter().map(|v| primitive_from_rational(v)).collect()
    };
    if e_rows.is_empty() {
        // no constraints: the affine set is everything
        return Some(vec![BigInt::zero(); m]);
    }
    let e = IntMatrix::from_rows(e_rows);
    let c: Vec<Rat> = (0..e.rows)
        .map(|i| (0..m).map(|j| Rat::from(e.at(i, j).clone()) * &particular[j]).sum())
        .collect();
    let bt = lattice.basis_matrix().transpose(); // m x r
    let mm = e.mul(&bt); // e.rows x r
    // scale to integers: d * (mm y) = d * c
    let mut d = BigInt::one();
    for x in &c {
        d = d.lcm(x.denom());
    }
    let md_t = {
        let mut t = mm.transpose();
        for i in 0..t.rows {
            for j in 0..t.cols {
                let v = t.at(i, j) * &d;
                *t.at_mut(i, j) = v;
            }
        }
        t
    };
    let v: Vec<BigInt> = c.iter().map(|x| x.numer() * (&d / x.denom())).collect();
    let (h, u) = hnf(&md_t);
    let z = express_in_hnf_rows(&h, &v)?;
    // y = z * U, then x = y * basis
    let y: Vec<BigInt> = (0..u.cols)
        .map(|j| (0..u.rows).map(|i| &z[i] * u.at(i, j)).sum())
        .collect();
    Some(lattice.to_ambient(&y))
}

/// Divide an integer vector by the gcd of its entries.  With
/// `orientation_free`, also flip sign so the first nonzero entry is positive.
pub fn primitive(v: &[i64], orientation_free: bool) -> Result<Vec<i64>, ExactError> {
    let mut g: i64 = 0;
    for &x in v {
        g = num_integer::gcd(g, x.abs());
    }
    if g == 0 {
        return Err(ExactError::ZeroVector);
    }
    let mut out: Vec<i64> = v.iter().map(|&x| x / g).collect();
    if orientation_free {
        if let Some(&f) = out.iter().find(|&&x| x != 0) {
            if f < 0 {
                for x in &mut out {
                    *x = -*x;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn det(m: &IntMatrix) -> BigInt {
        // product of HNF pivots gives |det|; recover sign by permutation-free
        // expansion for small sizes
        assert_eq!(m.rows, m.cols);
        let n = m.rows;
        if n == 0 {
            return bi(1);
        }
        let mut total = BigInt::zero();
        let mut perm: Vec<usize> = (0..n).collect();
        permute_det(m, &mut perm, 0, &mut total);
        total
    }

    fn permute_det(m: &IntMatrix, perm: &mut Vec<usize>, k: usize, acc: &mut BigInt) {
        let n = m.rows;
        if k == n {
            let mut sign = 1i64;
            for i in 0..n {
                for j in i + 1..n {
                    if perm[i] > perm[j] {
                        sign = -sign;
                    }
                }
            }
            let mut p = bi(sign);
            for i in 0..n {
                p *= m.at(i, perm[i]);
            }
            *acc += p;
            return;
        }
        for i in k..n {
            perm.swap(k, i);
            permute_det(m, perm, k + 1, acc);
            perm.swap(k, i);
        }
    }

    #[test]
    fn hnf_hand_reduced_example() {
        let m = mat(&[&[2, 4], &[1, 1]]);
        let (h, u) = hnf(&m);
        assert_eq!(h, mat(&[&[1, 1], &[0, 2]]));
        assert_eq!(u.mul(&m), h);
        assert_eq!(det(&u).abs(), bi(1));
    }

    #[test]
    fn snf_hand_reduced_example() {
        let m = mat(&[&[2, 0], &[0, 3]]);
        assert_eq!(snf(&m), vec![bi(1), bi(6)]);
    }

    #[test]
    fn snf_of_unimodular_lifted_rays() {
        // lifted vertices of a unimodular simplex form a basis of Z^4
        let m = mat(&[&[1, 0, 0, 0], &[1, 1, 0, 0], &[1, 0, 1, 0], &[1, 0, 0, 1]]);
        assert_eq!(snf(&m), vec![bi(1), bi(1), bi(1), bi(1)]);
        // lifted vertices of the (1,2)/(1,1) chart triangle are also unimodular
        let t = mat(&[&[1, 0, 2], &[1, 1, 1], &[1, 1, 2]]);
        assert_eq!(snf(&t), vec![bi(1), bi(1), bi(1)]);
        // a rank-deficient set of lifted rays: r3 - r4 = 2 (r1 - r2)
        let d = mat(&[&[1, 1, 0, 1], &[1, 1, 1, 0], &[1, 0, 0, 2], &[1, 0, 2, 0]]);
        assert_eq!(snf(&d).len(), 3);
    }

    #[test]
    fn solve_affine_unique_and_kernel() {
        // x + y = 3, x - y = 1  =>  x=2, y=1
        let a = mat(&[&[1, 1], &[1, -1]]);
        let (p, k) = solve_affine(&a, &[bi(3), bi(1)]).unwrap();
        assert_eq!(p, vec![Rat::from(bi(2)), Rat::from(bi(1))]);
        assert!(k.is_empty());
        // inconsistent
        let a2 = mat(&[&[1, 1], &[2, 2]]);
        assert!(solve_affine(&a2, &[bi(1), bi(3)]).is_none());
        // underdetermined: x + y + z = 1
        let a3 = mat(&[&[1, 1, 1]]);
        let (_, k3) = solve_affine(&a3, &[bi(1)]).unwrap();
        assert_eq!(k3.len(), 2);
    }

    #[test]
    fn gorenstein_solve_square_example() {
        // facet normals (homogenized) for the unit-square instance: all four
        // coordinate hyperplanes Z_{i,j}; <beta,u>=1 forces beta_{ij}=1 and the
        // lattice constraint then pins beta_0.
        // system in ambient R^5, functionals e_{ij} (j=1..4)
        let rows: Vec<Vec<i64>> = (0..4)
            .map(|j| {
                let mut r = vec![0i64; 5];
                r[j + 1] = 1;
                r
            })
            .collect();
        let a = IntMatrix::from_i64_rows(&rows);
        let rhs = vec![bi(1); 4];
        let (p, k) = solve_affine(&a, &rhs).unwrap();
        // lattice: generated by lifted points (1,p) of the square x11+x12=1, x21+x22=1
        let pts = [
            vec![1, 1, 0, 1, 0],
            vec![1, 1, 0, 0, 1],
            vec![1, 0, 1, 1, 0],
            vec![1, 0, 1, 0, 1],
        ];
        let lat = LatticeBasis::from_generators(
            5,
            &pts.iter().map(|p| p.iter().map(|&x| bi(x)).collect()).collect::<Vec<_>>(),
        );
        assert_eq!(lat.rank(), 3);
        let sol = lattice_point_in_affine_set(&p, &k, &lat).unwrap();
        assert_eq!(sol, vec![bi(2), bi(1), bi(1), bi(1), bi(1)]);
    }

    #[test]
    fn lattice_point_absent_for_half_integral_instance() {
        // two-factor a=(2,2), b=(1,1): facets F, R1, R2 force beta_0 = 3/2;
        // the unique rational solution is not integral.
        let a = mat(&[&[-2, 1, 1], &[2, -1, 0], &[2, 0, -1]]);
        let rhs = vec![bi(1), bi(1), bi(1)];
        let (p, k) = solve_affine(&a, &rhs).unwrap();
        assert!(k.is_empty());
        assert_eq!(p[0], Rat::new(bi(3), bi(2)));
        let lat = LatticeBasis::standard(3);
        assert!(lattice_point_in_affine_set(&p, &k, &lat).is_none());
    }

    #[test]
    fn lattice_basis_express_roundtrip() {
        let gens = vec![vec![bi(2), bi(0)], vec![bi(0), bi(3)], vec![bi(1), bi(1)]];
        let lat = LatticeBasis::from_generators(2, &gens);
        assert_eq!(lat.rank(), 2);
        // gcd structure: contains (1,1) but the lattice is all pairs with x+... :
        // generated by (2,0),(0,3),(1,1) -> contains (1,1),(2,0) -> (1,1)-(2,0)=(-1,1)
        // -> (1,1)+(-1,1)=(0,2), with (0,3) -> (0,1) -> everything
        assert!(lat.contains(&[bi(0), bi(1)]));
        let c = lat.express(&[bi(5), bi(-7)]).unwrap();
        assert_eq!(lat.to_ambient(&c), vec![bi(5), bi(-7)]);
        assert!(LatticeBasis::from_generators(2, &[vec![bi(2), bi(0)]]).express(&[bi(1), bi(0)]).is_none());
    }

    #[test]
    fn primitive_modes() {
        assert_eq!(primitive(&[-2, 4, -6], false).unwrap(), vec![-1, 2, -3]);
        assert_eq!(primitive(&[-2, 4, -6], true).unwrap(), vec![1, -2, 3]);
        assert_eq!(primitive(&[0, 0], false), Err(ExactError::ZeroVector));
    }

    #[test]
    fn randomized_hnf_snf_invariants() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..300 {
            let r = rng.gen_range(1..=4);
            let c = rng.gen_range(1..=4);
            let m = IntMatrix::from_i64_rows(
                &(0..r)
                    .map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect::<Vec<i64>>())
                    .collect::<Vec<_>>(),
            );
            let (h, u) = hnf(&m);
            assert_eq!(u.mul(&m), h);
            assert_eq!(det(&u).abs(), bi(1));
            // pivots positive, entries above reduced
            let mut last_col: i64 = -1;
            for i in 0..h.rows {
                if let Some(p) = (0..h.cols).find(|&j| !h.at(i, j).is_zero()) {
                    assert!(*h.at(i, p) > bi(0));
                    assert!((p as i64) > last_col);
                    last_col = p as i64;
                    for above in 0..i {
                        assert!(*h.at(above, p) >= bi(0) && h.at(above, p) < h.at(i, p));
                    }
                }
            }
            let f = snf(&m);
            for w in f.windows(2) {
                assert!((&w[1] % &w[0]).is_zero());
            }
            // product of invariant factors = gcd of maximal minors of that size
            let k = f.len();
            if k > 0 && r <= 4 && c <= 4 {
                let prod: BigInt = f.iter().product();
                let g = gcd_of_minors(&m, k);
                assert_eq!(prod, g);
            }
        }
    }

    fn gcd_of_minors(m: &IntMatrix, k: usize) -> BigInt {
        let mut g = BigInt::zero();
        for rs in subsets(m.rows, k) {
            for cs in subsets(m.cols, k) {
                let sub = IntMatrix::from_rows(
                    rs.iter()
                        .map(|&i| cs.iter().map(|&j| m.at(i, j).clone()).collect())
                        .collect(),
                );
                g = g.gcd(&det(&sub));
            }
        }
        g
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }
}
