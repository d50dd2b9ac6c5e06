//! Sparse multivariate polynomials with exact rational coefficients, just
//! enough for the cumulant identities.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Coef = BigRational;

/// Polynomial over a fixed number of variables; keys are exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Coef>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Coef) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Coef::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0u32; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Coef::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(Coef::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1 * c2;
                *out.terms.entry(e).or_insert_with(Coef::zero) += c;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn scale(&self, c: &Coef) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut out = Poly::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Substitute each variable with a polynomial (all in a common target ring).
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let target = subs.first().map_or(0, |p| p.nvars);
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    term = term.mul(&subs[i].pow(exp));
                }
            }
            out = out.add(&term);
        }
        out
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut mon = String::new();
            for (i, &exp) in e.iter().enumerate() {
                if exp == 1 {
                    mon.push_str(&names[i]);
                } else if exp > 1 {
                    mon.push_str(&format!("{}^{}", names[i], exp));
                }
            }
            let s = if mon.is_empty() {
                format!("{}", c)
            } else if c.is_one() {
                mon
            } else if (-c.clone()).is_one() {
                format!("-{}", mon)
            } else {
                format!("{}*{}", c, mon)
            };
            parts.push(s);
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(stripped) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i)).collect();
        write!(f, "{}", self.render(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn c(x: i64) -> Coef {
        Coef::from(BigInt::from(x))
    }

    #[test]
    fn ring_ops() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.add(&y).mul(&x.sub(&y));
        let q = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(p, q);
        assert!(p.sub(&q).is_zero());
        let r = x.add(&y).pow(3);
        assert_eq!(
            r.terms.get(&vec![2, 1]).cloned().unwrap(),
            c(3)
        );
    }

    #[test]
    fn compose_substitution() {
        // p(x,y) = x^2 + y, substitute x -> u+v, y -> u*v  (target ring 2 vars)
        let p = Poly::var(2, 0).pow(2).add(&Poly::var(2, 1));
        let u = Poly::var(2, 0);
        let v = Poly::var(2, 1);
        let s = p.compose(&[u.add(&v), u.mul(&v)]);
        // (u+v)^2 + uv = u^2 + 3uv + v^2
        assert_eq!(s.terms.get(&vec![1, 1]).cloned().unwrap(), c(3));
        assert_eq!(s.terms.len(), 3);
    }
}
