//! Labeled simplicial complexes, the cumulant change of coordinates x -> y -> z,
//! the secant substitution identity, and toric binomial relations among the
//! embedding monomials.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::poly::{Coef, Poly};
use crate::segre_veronese::SVParams;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CumulantError {
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("complex has {0} vertices, over the limit {1}")]
    TooManyVertices(usize, usize),
    #[error("binomial search limits exceeded: {0}")]
    BinomialBudget(String),
}

/// A simplex, identified by its label multiset.
#[derive(Debug, Clone)]
pub struct Simplex {
    /// multiplicity per label id
    pub mult: Vec<u32>,
    /// a representative set of vertex ids (sorted)
    pub rep: Vec<usize>,
}

impl Simplex {
    pub fn size(&self) -> usize {
        self.rep.len()
    }
}

/// Simplicial complex with labeled vertices; simplices carrying equal label
/// multisets share one coordinate.
#[derive(Debug, Clone)]
pub struct LabeledComplex {
    pub label_names: Vec<String>,
    /// label id of each vertex
    pub vertex_labels: Vec<usize>,
    /// all distinct simplices (by multiset), sorted by (size, multiset)
    pub simplices: Vec<Simplex>,
    by_mult: BTreeMap<Vec<u32>, usize>,
}

impl LabeledComplex {
    /// Build from generator simplices (vertex id lists); the downward closure
    /// is taken automatically.
    pub fn from_generators(
        label_names: Vec<String>,
        vertex_labels: Vec<usize>,
        generators: &[Vec<usize>],
    ) -> Result<Self, CumulantError> {
        let nv = vertex_labels.len();
        let nl = label_names.len();
        if vertex_labels.iter().any(|&l| l >= nl) {
            return Err(CumulantError::InvalidComplex("vertex label out of range".into()));
        }
        let mut reps: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
        for g in generators {
            let mut vs: Vec<usize> = g.clone();
            vs.sort_unstable();
            vs.dedup();
            if vs.len() != g.len() {
                return Err(CumulantError::InvalidComplex(
                    "generator repeats a vertex".into(),
                ));
            }
            if vs.iter().any(|&v| v >= nv) {
                return Err(CumulantError::InvalidComplex("vertex id out of range".into()));
            }
            // all nonempty subsets
            let m = vs.len();
            for mask in 1u64..(1u64 << m) {
                let sub: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| vs[i]).collect();
                let mut mult = vec![0u32; nl];
                for &v in &sub {
                    mult[vertex_labels[v]] += 1;
                }
                reps.entry(mult)
                    .and_modify(|r| {
                        if sub < *r {
                            *r = sub.clone();
                        }
                    })
                    .or_insert(sub);
            }
        }
        let mut simplices: Vec<Simplex> = reps
            .into_iter()
            .map(|(mult, rep)| Simplex { mult, rep })
            .collect();
        simplices.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.mult.cmp(&b.mult)));
        let by_mult = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.mult.clone(), i))
            .collect();
        Ok(LabeledComplex { label_names, vertex_labels, simplices, by_mult })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn n_labels(&self) -> usize {
        self.label_names.len()
    }

    pub fn index_of_mult(&self, mult: &[u32]) -> Option<usize> {
        self.by_mult.get(mult).copied()
    }

    pub fn index_of_vertices(&self, vs: &[usize]) -> Option<usize> {
        let mut mult = vec![0u32; self.n_labels()];
        for &v in vs {
            mult[self.vertex_labels[v]] += 1;
        }
        self.index_of_mult(&mult)
    }

    pub fn simplex_name(&self, idx: usize) -> String {
        let s = &self.simplices[idx];
        let mut parts = Vec::new();
        for (l, &m) in s.mult.iter().enumerate() {
            for _ in 0..m {
                parts.push(self.label_names[l].clone());
            }
        }
        parts.join("")
    }

    /// Vertices connected through shared simplices?
    /// Connectivity of the identified complex: simplices only exist up to
    /// label multiset, so the meaningful graph is on labels, joined whenever
    /// two labels occur together in a simplex.
    pub fn is_connected(&self) -> bool {
        let nl = self.label_names.len();
        if self.n_vertices() == 0 {
            return true;
        }
        let mut parent: Vec<usize> = (0..nl).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        let mut seen = vec![false; nl];
        for s in &self.simplices {
            let labs: Vec<usize> = (0..nl).filter(|&l| s.mult[l] > 0).collect();
            for w in labs.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
            for &l in &labs {
                seen[l] = true;
            }
        }
        // every label carried by a vertex must occur in some simplex
        if self.vertex_labels.iter().any(|&l| !seen[l]) {
            return false;
        }
        let mut root = None;
        for l in 0..nl {
            if seen[l] {
                let r = find(&mut parent, l);
                match root {
                    None => root = Some(r),
                    Some(r0) if r0 != r => return false,
                    _ => {}
                }
            }
        }
        true
    }

    /// Exponent-vector columns (over labels) of the embedding coordinates:
    /// one per simplex with at least 2 vertices.
    pub fn embedding_columns(&self) -> Vec<(usize, Vec<u32>)> {
        self.simplices
            .iter()
            .enumerate()
            .filter(|(_, s)| s.size() >= 2)
            .map(|(i, s)| (i, s.mult.clone()))
            .collect()
    }
}

/// The two running-example complexes: both have generators {1,2} and a
/// triangle on three further vertices; on the left all four vertices carry
/// distinct labels, on the right two triangle vertices share the label 3.
pub fn example_complexes() -> (LabeledComplex, LabeledComplex) {
    let left = LabeledComplex::from_generators(
        vec!["1".into(), "2".into(), "3".into(), "4".into()],
        vec![0, 1, 2, 3],
        &[vec![0, 1], vec![1, 2, 3]],
    )
    .unwrap();
    let right = LabeledComplex::from_generators(
        vec!["1".into(), "2".into(), "3".into()],
        vec![0, 1, 2, 2],
        &[vec![0, 1], vec![1, 2, 3]],
    )
    .unwrap();
    (left, right)
}

/// Simplicial complex of the Segre-Veronese embedding: a_i copies of each of
/// the b_i + 1 labels of factor i; simplices are vertex sets with at most a_i
/// vertices in block i.
pub fn sv_complex(p: &SVParams, max_vertices: usize) -> Result<LabeledComplex, CumulantError> {
    let mut label_names = Vec::new();
    let mut vertex_labels = Vec::new();
    let mut block_of_label = Vec::new();
    for i in 0..p.k() {
        for j in 0..=(p.b[i] as usize) {
            block_of_label.push(i);
            label_names.push(format!("t{}{}", i + 1, j));
        }
    }
    let mut label_base = 0usize;
    for i in 0..p.k() {
        for j in 0..=(p.b[i] as usize) {
            for _ in 0..p.a[i] {
                vertex_labels.push(label_base + j);
            }
        }
        label_base += p.b[i] as usize + 1;
    }
    let nv = vertex_labels.len();
    if nv > max_vertices {
        return Err(CumulantError::TooManyVertices(nv, max_vertices));
    }
    // generators: one representative vertex set per maximal label multiset
    // (block sums exactly a_i); enumerate multisets per block and combine
    let mut block_choices: Vec<Vec<Vec<u32>>> = Vec::new();
    for i in 0..p.k() {
        let w = p.b[i] as usize + 1;
        let mut outs: Vec<Vec<u32>> = Vec::new();
        let mut cur = vec![0u32; w];
        fn rec(cur: &mut Vec<u32>, pos: usize, left: u32, outs: &mut Vec<Vec<u32>>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                outs.push(cur.clone());
                return;
            }
            for x in 0..=left {
                cur[pos] = x;
                rec(cur, pos + 1, left - x, outs);
            }
        }
        rec(&mut cur, 0, p.a[i] as u32, &mut outs);
        block_choices.push(outs);
    }
    let mut generators: Vec<Vec<usize>> = Vec::new();
    let mut combo: Vec<usize> = vec![0; p.k()];
    loop {
        // realize the combined multiset with concrete vertex ids
        let mut gen: Vec<usize> = Vec::new();
        let mut vbase = 0usize;
        for i in 0..p.k() {
            let w = p.b[i] as usize + 1;
            let mult = &block_choices[i][combo[i]];
            for j in 0..w {
                // vertices for label j of block i sit at vbase + j*a_i ..
                for c in 0..mult[j] as usize {
                    gen.push(vbase + j * p.a[i] as usize + c);
                }
            }
            vbase += w * p.a[i] as usize;
        }
        generators.push(gen);
        // odometer
        let mut i = 0;
        loop {
            if i == p.k() {
                return LabeledComplex::from_generators(label_names, vertex_labels, &generators);
            }
            combo[i] += 1;
            if combo[i] < block_choices[i].len() {
                break;
            }
            combo[i] = 0;
            i += 1;
        }
    }
}

/// Random connected labeled complex for property tests.
pub fn random_complex<R: Rng>(rng: &mut R, max_vertices: usize) -> LabeledComplex {
    let nv = rng.gen_range(3..=max_vertices.max(3));
    let nl = rng.gen_range(2..=nv);
    let label_names: Vec<String> = (0..nl).map(|l| format!("t{}", l + 1)).collect();
    let vertex_labels: Vec<usize> = (0..nv).map(|_| rng.gen_range(0..nl)).collect();
    let mut generators: Vec<Vec<usize>> = Vec::new();
    let ngen = rng.gen_range(1..=4);
    for _ in 0..ngen {
        let sz = rng.gen_range(2..=5.min(nv));
        let mut g: BTreeSet<usize> = BTreeSet::new();
        while g.len() < sz {
            g.insert(rng.gen_range(0..nv));
        }
        generators.push(g.into_iter().collect());
    }
    // a path of edges guarantees connectivity
    for v in 0..nv - 1 {
        generators.push(vec![v, v + 1]);
    }
    LabeledComplex::from_generators(label_names, vertex_labels, &generators)
        .expect("randomly generated complex is valid")
}

/// Interval partitions of 0..m into contiguous blocks, every block of size >= 2.
pub fn thick_interval_partitions(m: usize) -> Vec<Vec<(usize, usize)>> {
    // each partition is a list of half-open (start, end) ranges
    let mut out = Vec::new();
    if m < 2 {
        return out;
    }
    let mut cur: Vec<(usize, usize)> = Vec::new();
    fn rec(start: usize, m: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if start == m {
            out.push(cur.clone());
            return;
        }
        for end in (start + 2)..=m {
            cur.push((start, end));
            rec(end, m, cur, out);
            cur.pop();
        }
    }
    rec(0, m, &mut cur, &mut out);
    out
}

/// The cumulant coordinates of a complex: polynomials in the x-variables
/// (one per simplex; the empty simplex is the constant 1).
pub struct CumulantData<'a> {
    pub complex: &'a LabeledComplex,
    /// y_sigma as a polynomial in x, per simplex
    pub y_in_x: Vec<Poly>,
    /// z_sigma as a polynomial in x, per simplex
    pub z_in_x: Vec<Poly>,
}

pub fn y_transform(cx: &LabeledComplex) -> Vec<Poly> {
    let nx = cx.simplices.len();
    cx.simplices
        .iter()
        .map(|s| {
            let m = s.size();
            if m <= 1 {
                return Poly::var(nx, cx.index_of_mult(&s.mult).unwrap());
            }
            let mut acc = Poly::zero(nx);
            for mask in 0u64..(1u64 << m) {
                let sub: Vec<usize> =
                    (0..m).filter(|i| mask >> i & 1 == 1).map(|i| s.rep[i]).collect();
                let sign = if (m - sub.len()) % 2 == 0 { 1i64 } else { -1 };
                let mut term = if sub.is_empty() {
                    Poly::one(nx)
                } else {
                    Poly::var(nx, cx.index_of_vertices(&sub).expect("downward closed"))
                };
                for i in 0..m {
                    if mask >> i & 1 == 0 {
                        term = term.mul(&Poly::var(
                            nx,
                            cx.index_of_vertices(&[s.rep[i]]).unwrap(),
                        ));
                    }
                }
                let c = Coef::from(num_bigint::BigInt::from(sign));
                acc = acc.add(&term.scale(&c));
            }
            acc
        })
        .collect()
}

/// Representative vertices of a simplex ordered by (label, id); the interval
/// partitions of z are taken in this order.
fn ordered_rep(cx: &LabeledComplex, s: &Simplex) -> Vec<usize> {
    let mut r = s.rep.clone();
    r.sort_by_key(|&v| (cx.vertex_labels[v], v));
    r
}

pub fn z_transform(cx: &LabeledComplex, y_in_x: &[Poly]) -> Vec<Poly> {
    let nx = cx.simplices.len();
    cx.simplices
        .iter()
        .map(|s| {
            let m = s.size();
            if m <= 1 {
                return Poly::var(nx, cx.index_of_mult(&s.mult).unwrap());
            }
            let rep = ordered_rep(cx, s);
            let mut acc = Poly::zero(nx);
            for part in thick_interval_partitions(m) {
                let sign = if (part.len() + 1) % 2 == 0 { 1i64 } else { -1 };
                let mut term = Poly::constant(nx, Coef::from(num_bigint::BigInt::from(sign)));
                for &(a, b) in &part {
                    let idx = cx
                        .index_of_vertices(&rep[a..b])
                        .expect("interval block is a simplex");
                    term = term.mul(&y_in_x[idx]);
                }
                acc = acc.add(&term);
            }
            acc
        })
        .collect()
}

pub fn cumulant_data(cx: &LabeledComplex) -> CumulantData<'_> {
    let y_in_x = y_transform(cx);
    let z_in_x = z_transform(cx, &y_in_x);
    CumulantData { complex: cx, y_in_x, z_in_x }
}

/// Parameter ring layout for the secant substitution: pi, t_l, u_l.
pub struct ParamRing {
    pub nvars: usize,
    pub n_labels: usize,
}

impl ParamRing {
    pub fn new(n_labels: usize) -> Self {
        ParamRing { nvars: 1 + 2 * n_labels, n_labels }
    }
    pub fn pi(&self) -> Poly {
        Poly::var(self.nvars, 0)
    }
    pub fn t(&self, l: usize) -> Poly {
        Poly::var(self.nvars, 1 + l)
    }
    pub fn u(&self, l: usize) -> Poly {
        Poly::var(self.nvars, 1 + self.n_labels + l)
    }
    pub fn one(&self) -> Poly {
        Poly::one(self.nvars)
    }
}

/// x_sigma = pi * prod t + (1 - pi) * prod u, products over the label multiset.
pub fn secant_substitution(ring: &ParamRing, mult: &[u32]) -> Poly {
    let mut tprod = ring.one();
    let mut uprod = ring.one();
    for (l, &m) in mult.iter().enumerate() {
        if m > 0 {
            tprod = tprod.mul(&ring.t(l).pow(m));
            uprod = uprod.mul(&ring.u(l).pow(m));
        }
    }
    let pi = ring.pi();
    let onem = ring.one().sub(&pi);
    pi.mul(&tprod).add(&onem.mul(&uprod))
}

/// Result of checking the closed-form secant identity per simplex.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub simplex_names: Vec<String>,
    pub all_match: bool,
    pub mismatches: Vec<String>,
}

fn y_params(cx: &LabeledComplex, ring: &ParamRing) -> Vec<Poly> {
    // y directly in the parameter ring, memoized over simplices
    let mut out: Vec<Poly> = Vec::with_capacity(cx.simplices.len());
    for s in &cx.simplices {
        let m = s.size();
        if m <= 1 {
            out.push(secant_substitution(ring, &s.mult));
            continue;
        }
        let mut acc = Poly::zero(ring.nvars);
        for mask in 0u64..(1u64 << m) {
            let sub: Vec<usize> =
                (0..m).filter(|i| mask >> i & 1 == 1).map(|i| s.rep[i]).collect();
            let sign = if (m - sub.len()) % 2 == 0 { 1i64 } else { -1 };
            let mut mult = vec![0u32; cx.n_labels()];
            for &v in &sub {
                mult[cx.vertex_labels[v]] += 1;
            }
            let mut term = secant_substitution(ring, &mult);
            for i in 0..m {
                if mask >> i & 1 == 0 {
                    let mut vm = vec![0u32; cx.n_labels()];
                    vm[cx.vertex_labels[s.rep[i]]] = 1;
                    term = term.mul(&secant_substitution(ring, &vm));
                }
            }
            acc = acc.add(&term.scale(&Coef::from(num_bigint::BigInt::from(sign))));
        }
        out.push(acc);
    }
    out
}

fn z_params(cx: &LabeledComplex, ring: &ParamRing, y: &[Poly]) -> Vec<Poly> {
    cx.simplices
        .iter()
        .map(|s| {
            let m = s.size();
            if m <= 1 {
                return secant_substitution(ring, &s.mult);
            }
            let rep = ordered_rep(cx, s);
            let mut acc = Poly::zero(ring.nvars);
            for part in thick_interval_partitions(m) {
                let sign = if (part.len() + 1) % 2 == 0 { 1i64 } else { -1 };
                let mut term =
                    Poly::constant(ring.nvars, Coef::from(num_bigint::BigInt::from(sign)));
                for &(a, b) in &part {
                    let idx = cx.index_of_vertices(&rep[a..b]).unwrap();
                    term = term.mul(&y[idx]);
                }
                acc = acc.add(&term);
            }
            acc
        })
        .collect()
}

/// z_sigma under the secant substitution must equal
/// pi (1 - pi) (1 - 2 pi)^{m-2} * prod over vertices (t - u).
pub fn verify_secant_identity(cx: &LabeledComplex) -> IdentityReport {
    let ring = ParamRing::new(cx.n_labels());
    let y = y_params(cx, &ring);
    let z = z_params(cx, &ring, &y);
    let pi = ring.pi();
    let onem = ring.one().sub(&pi);
    let one2 = ring.one().sub(&pi.scale(&Coef::from(num_bigint::BigInt::from(2))));
    let mut mismatches = Vec::new();
    let mut names = Vec::new();
    for (i, s) in cx.simplices.iter().enumerate() {
        let m = s.size();
        if m < 2 {
            continue;
        }
        names.push(cx.simplex_name(i));
        let mut closed = pi.mul(&onem).mul(&one2.pow((m - 2) as u32));
        for (l, &mu) in s.mult.iter().enumerate() {
            if mu > 0 {
                closed = closed.mul(&ring.t(l).sub(&ring.u(l)).pow(mu));
            }
        }
        if !z[i].sub(&closed).is_zero() {
            mismatches.push(cx.simplex_name(i));
        }
    }
    IdentityReport { simplex_names: names, all_match: mismatches.is_empty(), mismatches }
}

/// Reparametrized product form: z_sigma (1-2pi)^2 must equal
/// pi (1-pi) * prod over vertices ((t - u)(1 - 2 pi)), with the convention
/// u'_v = (t_v - u_v)(1 - 2 pi).
pub fn verify_reparametrization(cx: &LabeledComplex) -> IdentityReport {
    let ring = ParamRing::new(cx.n_labels());
    let y = y_params(cx, &ring);
    let z = z_params(cx, &ring, &y);
    let pi = ring.pi();
    let onem = ring.one().sub(&pi);
    let one2 = ring.one().sub(&pi.scale(&Coef::from(num_bigint::BigInt::from(2))));
    let mut mismatches = Vec::new();
    let mut names = Vec::new();
    for (i, s) in cx.simplices.iter().enumerate() {
        let m = s.size();
        if m < 2 {
            continue;
        }
        names.push(cx.simplex_name(i));
        let lhs = z[i].mul(&one2.pow(2));
        let mut rhs = pi.mul(&onem);
        for (l, &mu) in s.mult.iter().enumerate() {
            if mu > 0 {
                rhs = rhs.mul(&ring.t(l).sub(&ring.u(l)).mul(&one2).pow(mu));
            }
        }
        if !lhs.sub(&rhs).is_zero() {
            mismatches.push(cx.simplex_name(i));
        }
    }
    IdentityReport { simplex_names: names, all_match: mismatches.is_empty(), mismatches }
}

/// z_sigma vanishes identically under the rank-one substitution
/// x_sigma = prod t (the image of the monomial embedding) for dim sigma >= 1.
pub fn verify_rank_one_vanishing(cx: &LabeledComplex) -> bool {
    let nl = cx.n_labels();
    let ring = ParamRing::new(nl);
    // substitute x_sigma = prod t: specialize pi = 1
    let data = cumulant_data(cx);
    let subs: Vec<Poly> = cx
        .simplices
        .iter()
        .map(|s| {
            let mut p = ring.one();
            for (l, &m) in s.mult.iter().enumerate() {
                if m > 0 {
                    p = p.mul(&ring.t(l).pow(m));
                }
            }
            p
        })
        .collect();
    cx.simplices.iter().enumerate().all(|(i, s)| {
        if s.size() < 2 {
            true
        } else {
            data.z_in_x[i].compose(&subs).is_zero()
        }
    })
}

/// Express x in terms of z by triangular inversion: returns one polynomial in
/// the z-variables per simplex.
pub fn x_in_terms_of_z(cx: &LabeledComplex) -> Vec<Poly> {
    let nz = cx.simplices.len();
    let mut y_in_z: Vec<Poly> = vec![Poly::zero(nz); nz];
    let mut x_in_z: Vec<Poly> = vec![Poly::zero(nz); nz];
    // simplices are sorted by size, so all strict sub-simplices come earlier
    for (i, s) in cx.simplices.iter().enumerate() {
        let m = s.size();
        if m <= 1 {
            y_in_z[i] = Poly::var(nz, i);
            x_in_z[i] = Poly::var(nz, i);
            continue;
        }
        // y = z + sum over partitions with >= 2 blocks of (-1)^{|g|} prod y_B
        let rep = ordered_rep(cx, s);
        let mut y = Poly::var(nz, i);
        for part in thick_interval_partitions(m) {
            if part.len() < 2 {
                continue;
            }
            let sign = if part.len() % 2 == 0 { 1i64 } else { -1 };
            let mut term = Poly::constant(nz, Coef::from(num_bigint::BigInt::from(sign)));
            for &(a, b) in &part {
                let idx = cx.index_of_vertices(&rep[a..b]).unwrap();
                term = term.mul(&y_in_z[idx]);
            }
            y = y.add(&term);
        }
        y_in_z[i] = y;
        // x = y - sum over proper subsets of (-1)^{m - |S|} x_S prod x_v
        let mut x = y_in_z[i].clone();
        for mask in 0u64..((1u64 << m) - 1) {
            let sub: Vec<usize> =
                (0..m).filter(|j| mask >> j & 1 == 1).map(|j| s.rep[j]).collect();
            let sign = if (m - sub.len()) % 2 == 0 { 1i64 } else { -1 };
            let mut term = if sub.is_empty() {
                Poly::one(nz)
            } else {
                x_in_z[cx.index_of_vertices(&sub).unwrap()].clone()
            };
            for j in 0..m {
                if mask >> j & 1 == 0 {
                    term = term.mul(&x_in_z[cx.index_of_vertices(&[s.rep[j]]).unwrap()]);
                }
            }
            x = x.sub(&term.scale(&Coef::from(num_bigint::BigInt::from(sign))));
        }
        x_in_z[i] = x;
    }
    x_in_z
}

/// A binomial relation lhs - rhs between monomials in the embedding
/// coordinates; sides have disjoint support and equal label image.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Binomial {
    /// (simplex index, exponent), sorted by index
    pub lhs: Vec<(usize, u32)>,
    pub rhs: Vec<(usize, u32)>,
}

impl Binomial {
    pub fn render(&self, cx: &LabeledComplex) -> String {
        let side = |s: &[(usize, u32)]| {
            let mut factors: Vec<(String, u32)> =
                s.iter().map(|&(i, e)| (cx.simplex_name(i), e)).collect();
            factors.sort();
            factors
                .into_iter()
                .map(|(name, e)| {
                    if e == 1 {
                        format!("x_{{{}}}", name)
                    } else {
                        format!("x_{{{}}}^{}", name, e)
                    }
                })
                .collect::<Vec<_>>()
                .join("")
        };
        format!("{} - {}", side(&self.lhs), side(&self.rhs))
    }
}

pub const MAX_BINOMIAL_COLUMNS: usize = 20;
pub const MAX_BINOMIAL_DEGREE: u32 = 6;

/// All binomial relations of total degree <= bound per side between monomials
/// in the embedding coordinates (simplices with >= 2 vertices), up to sign.
pub fn toric_binomials(
    cx: &LabeledComplex,
    degree_bound: u32,
) -> Result<Vec<Binomial>, CumulantError> {
    let columns = cx.embedding_columns();
    if columns.len() > MAX_BINOMIAL_COLUMNS {
        return Err(CumulantError::BinomialBudget(format!(
            "{} embedding coordinates (limit {})",
            columns.len(),
            MAX_BINOMIAL_COLUMNS
        )));
    }
    if degree_bound > MAX_BINOMIAL_DEGREE {
        return Err(CumulantError::BinomialBudget(format!(
            "degree bound {} (limit {})",
            degree_bound, MAX_BINOMIAL_DEGREE
        )));
    }
    let nl = cx.n_labels();
    // enumerate exponent vectors of total degree <= bound, group by image
    let mut groups: BTreeMap<Vec<u32>, Vec<Vec<u32>>> = BTreeMap::new();
    let nc = columns.len();
    let mut exp = vec![0u32; nc];
    loop {
        let deg: u32 = exp.iter().sum();
        if deg >= 1 {
            let mut img = vec![0u32; nl];
            for (ci, e) in exp.iter().enumerate() {
                if *e > 0 {
                    for l in 0..nl {
                        img[l] += columns[ci].1[l] * e;
                    }
                }
            }
            groups.entry(img).or_default().push(exp.clone());
        }
        // odometer with degree cap
        let mut i = 0;
        loop {
            if i == nc {
                // done
                let mut out: BTreeSet<Binomial> = BTreeSet::new();
                for (_, g) in groups {
                    for x in 0..g.len() {
                        for y in x + 1..g.len() {
                            let (u, v) = (&g[x], &g[y]);
                            // strip common factor so sides have disjoint support
                            let mut lu = vec![0u32; nc];
                            let mut lv = vec![0u32; nc];
                            for c in 0..nc {
                                let m = u[c].min(v[c]);
                                lu[c] = u[c] - m;
                                lv[c] = v[c] - m;
                            }
                            if lu.iter().all(|&e| e == 0) {
                                continue;
                            }
                            // the side reaching into the larger simplices
                            // (later columns) goes on the left
                            let u_key: Vec<u32> = lu.iter().rev().copied().collect();
                            let v_key: Vec<u32> = lv.iter().rev().copied().collect();
                            let (big, small) =
                                if u_key > v_key { (lu, lv) } else { (lv, lu) };
                            let pack = |w: &[u32]| {
                                w.iter()
                                    .enumerate()
                                    .filter(|(_, &e)| e > 0)
                                    .map(|(c, &e)| (columns[c].0, e))
                                    .collect::<Vec<_>>()
                            };
                            out.insert(Binomial { lhs: pack(&big), rhs: pack(&small) });
                        }
                    }
                }
                return Ok(out.into_iter().collect());
            }
            if exp.iter().sum::<u32>() < degree_bound {
                exp[i] += 1;
                break;
            }
            // carry: zero out and advance
            exp[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::SeedableRng;

    fn c(x: i64) -> Coef {
        Coef::from(BigInt::from(x))
    }

    fn left_complex() -> LabeledComplex {
        example_complexes().0
    }

    fn right_complex() -> LabeledComplex {
        example_complexes().1
    }

    #[test]
    fn closure_and_identification() {
        let cx = left_complex();
        // simplices: 4 vertices, edges 12,23,24,34, triangle 234
        assert_eq!(cx.simplices.len(), 4 + 4 + 1);
        assert!(cx.is_connected());
        let cr = right_complex();
        // vertices: 1,2,3 (two label-3 vertices identified by multiset at size 1? no:
        // distinct vertices, but multiset {3} shared) -> simplices {1},{2},{3},
        // {1,2},{2,3},{3,3},{2,3,3}
        assert_eq!(cr.simplices.len(), 7);
    }

    #[test]
    fn thick_partition_counts_are_fibonacci() {
        let counts: Vec<usize> = (2..=8).map(|m| thick_interval_partitions(m).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 8, 13]);
    }

    #[test]
    fn y_polynomials_match_hand_expansion() {
        let cx = left_complex();
        let y = y_transform(&cx);
        let i12 = cx.index_of_mult(&[1, 1, 0, 0]).unwrap();
        let x = |m: &[u32]| cx.index_of_mult(m).unwrap();
        // y_12 = x_12 - x_1 x_2
        let mut e12 = vec![0u32; cx.simplices.len()];
        e12[x(&[1, 1, 0, 0])] = 1;
        assert_eq!(y[i12].terms.get(&e12).cloned().unwrap(), c(1));
        let mut e1x2 = vec![0u32; cx.simplices.len()];
        e1x2[x(&[1, 0, 0, 0])] = 1;
        e1x2[x(&[0, 1, 0, 0])] = 1;
        assert_eq!(y[i12].terms.get(&e1x2).cloned().unwrap(), c(-1));
        assert_eq!(y[i12].terms.len(), 2);

        // repeated-label coefficient: y_233 has -2 x_23 x_3 and +2 x_2 x_3^2
        let cr = right_complex();
        let yr = y_transform(&cr);
        let i233 = cr.index_of_mult(&[0, 1, 2]).unwrap();
        let xr = |m: &[u32]| cr.index_of_mult(m).unwrap();
        let nv = cr.simplices.len();
        let mut e = vec![0u32; nv];
        e[xr(&[0, 1, 1])] = 1;
        e[xr(&[0, 0, 1])] = 1;
        assert_eq!(yr[i233].terms.get(&e).cloned().unwrap(), c(-2));
        let mut e2 = vec![0u32; nv];
        e2[xr(&[0, 1, 0])] = 1;
        e2[xr(&[0, 0, 1])] = 2;
        assert_eq!(yr[i233].terms.get(&e2).cloned().unwrap(), c(2));
    }

    #[test]
    fn secant_identity_on_example_complexes() {
        for cx in [left_complex(), right_complex()] {
            let r = verify_secant_identity(&cx);
            assert!(r.all_match, "mismatches: {:?}", r.mismatches);
            let r2 = verify_reparametrization(&cx);
            assert!(r2.all_match, "reparam mismatches: {:?}", r2.mismatches);
            assert!(verify_rank_one_vanishing(&cx));
        }
    }

    #[test]
    fn secant_identity_on_sv_complexes() {
        for (a, b) in [(vec![1i64, 1], vec![1i64, 1]), (vec![2], vec![2]), (vec![1, 2], vec![1, 1])] {
            let p = SVParams::new(a, b).unwrap();
            let cx = sv_complex(&p, 12).unwrap();
            assert!(cx.is_connected());
            let r = verify_secant_identity(&cx);
            assert!(r.all_match, "mismatches: {:?}", r.mismatches);
        }
    }

    #[test]
    fn secant_identity_on_random_complexes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..5 {
            let cx = random_complex(&mut rng, 8);
            assert!(cx.is_connected());
            let r = verify_secant_identity(&cx);
            assert!(r.all_match, "mismatches: {:?}", r.mismatches);
        }
    }

    #[test]
    fn transform_round_trip() {
        for cx in [left_complex(), right_complex()] {
            if cx.simplices.len() > 10 {
                continue;
            }
            let data = cumulant_data(&cx);
            let xz = x_in_terms_of_z(&cx);
            for (i, z) in data.z_in_x.iter().enumerate() {
                // substitute x -> x(z) into z(x): must return the variable z_i
                let back = z.compose(&xz);
                let expect = Poly::var(cx.simplices.len(), i);
                assert!(back.sub(&expect).is_zero(), "round trip failed at {}", cx.simplex_name(i));
            }
        }
    }

    #[test]
    fn binomials_of_example_complexes() {
        let cx = left_complex();
        let bs = toric_binomials(&cx, 4).unwrap();
        let rendered: Vec<String> = bs.iter().map(|b| b.render(&cx)).collect();
        assert!(
            rendered.contains(&"x_{234}^2 - x_{23}x_{24}x_{34}".to_string()),
            "got {:?}",
            rendered
        );
        let cr = right_complex();
        let bs2 = toric_binomials(&cr, 4).unwrap();
        let rendered2: Vec<String> = bs2.iter().map(|b| b.render(&cr)).collect();
        assert!(
            rendered2.contains(&"x_{233}^2 - x_{23}^2x_{33}".to_string()),
            "got {:?}",
            rendered2
        );
    }

    #[test]
    fn binomials_vanish_under_rank_one_substitution() {
        let cx = left_complex();
        let ring = ParamRing::new(cx.n_labels());
        for b in toric_binomials(&cx, 4).unwrap() {
            let side_poly = |side: &[(usize, u32)]| {
                let mut p = ring.one();
                for &(i, e) in side {
                    let mut q = ring.one();
                    for (l, &m) in cx.simplices[i].mult.iter().enumerate() {
                        if m > 0 {
                            q = q.mul(&ring.t(l).pow(m));
                        }
                    }
                    p = p.mul(&q.pow(e));
                }
                p
            };
            assert!(side_poly(&b.lhs).sub(&side_poly(&b.rhs)).is_zero());
        }
    }
}
