//! Normality checks: every lattice point of s*P must be a sum of s lattice
//! points of P, and the lattice generated by the lifted points must be
//! saturated.

use serde::Serialize;
use thiserror::Error;

use crate::exact::LatticeBasis;
use crate::polytope::{LatticePolytope, PolytopeError};

#[derive(Debug, Error)]
pub enum NormalityError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalityReport {
    /// largest s (<= s_max) with every point of s*P a sum of s points of P
    pub normal_up_to: i64,
    /// first failing dilation level and witness point, if any
    pub failure: Option<(i64, Vec<i64>)>,
}

/// Inductive Minkowski check.  Once level s-1 passes, every lattice point of
/// (s-1)*P is a sum of s-1 points of P, so a point q of s*P decomposes iff
/// q - p lies in (s-1)*P for some point p of P.  Since s*P is cut out by the
/// inequalities of P with right-hand sides scaled by s, that membership is a
/// slack comparison: writing slack_s(x, i) = <u_i, x> - s * rhs_i, we need
/// slack_s(q, i) >= slack_1(p, i) for every inequality i.  The dilation is
/// streamed, never materialized.
pub fn check_normality(
    poly: &LatticePolytope,
    s_max: i64,
    budget: u128,
) -> Result<NormalityReport, NormalityError> {
    if poly.points.is_empty() {
        return Ok(NormalityReport { normal_up_to: s_max, failure: None });
    }
    let m = poly.inequalities.len();
    let slack: Vec<Vec<i64>> = poly
        .points
        .iter()
        .map(|p| {
            poly.inequalities
                .iter()
                .map(|iq| iq.normal.iter().zip(p).map(|(c, x)| c * x).sum::<i64>() - iq.rhs)
                .collect()
        })
        .collect();
    for s in 2..=s_max {
        let mut failure: Option<(i64, Vec<i64>)> = None;
        let mut dq = vec![0i64; m];
        // consecutive points from the DFS almost always share a witness, so
        // scan circularly from the last hit
        let mut last = 0usize;
        poly.dilate_for_each(s, budget, &mut |q| {
            if failure.is_some() {
                return;
            }
            for (i, iq) in poly.inequalities.iter().enumerate() {
                dq[i] = iq.normal.iter().zip(q).map(|(c, x)| c * x).sum::<i64>() - s * iq.rhs;
            }
            let hit = (last..slack.len())
                .chain(0..last)
                .find(|&j| slack[j].iter().zip(&dq).all(|(cp, d)| d >= cp));
            match hit {
                Some(j) => last = j,
                None => failure = Some((s, q.to_vec())),
            }
        })?;
        if failure.is_some() {
            return Ok(NormalityReport { normal_up_to: s - 1, failure });
        }
    }
    Ok(NormalityReport { normal_up_to: s_max, failure: None })
}

#[derive(Debug, Clone, Serialize)]
pub struct SaturationReport {
    pub rank: usize,
    pub saturated: bool,
}

/// The lattice generated by the lifted lattice points {(1, p)} must be
/// saturated in Z^{n+1} (its Smith form is all ones).
pub fn check_lattice_saturation(poly: &LatticePolytope) -> Result<SaturationReport, NormalityError> {
    if poly.points.is_empty() {
        return Ok(SaturationReport { rank: 0, saturated: true });
    }
    let m = poly.ambient_dim + 1;
    let lat = LatticeBasis::from_i64_generators(
        m,
        poly.points
            .iter()
            .map(|p| std::iter::once(1i64).chain(p.iter().copied()).collect()),
    );
    Ok(SaturationReport { rank: lat.rank(), saturated: lat.is_saturated() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::DEFAULT_ENUM_BUDGET;
    use crate::segre_veronese::SVParams;

    fn poly(a: &[i64], b: &[i64]) -> LatticePolytope {
        SVParams::new(a.to_vec(), b.to_vec())
            .unwrap()
            .build_polytope(DEFAULT_ENUM_BUDGET)
            .unwrap()
    }

    #[test]
    fn normality_of_small_instances() {
        for (a, b) in [
            (vec![1i64, 1], vec![2i64, 2]),
            (vec![2], vec![3]),
            (vec![2, 2], vec![1, 1]),
            (vec![1, 2], vec![1, 2]),
            (vec![1, 1, 2], vec![1, 1, 1]),
            (vec![3], vec![2]),
        ] {
            let p = poly(&a, &b);
            let r = check_normality(&p, 3, DEFAULT_ENUM_BUDGET).unwrap();
            assert!(r.failure.is_none(), "normality failed for {:?}/{:?}: {:?}", a, b, r);
            assert_eq!(r.normal_up_to, 3);
            let s = check_lattice_saturation(&p).unwrap();
            assert!(s.saturated);
        }
    }

    #[test]
    fn dp_matches_exhaustive_sums_on_tiny_instances() {
        use std::collections::BTreeSet;
        for (a, b) in [(vec![1i64, 2], vec![1i64, 1]), (vec![2], vec![2]), (vec![1, 1], vec![1, 2])] {
            let p = poly(&a, &b);
            if p.points.len() > 50 {
                continue;
            }
            // brute force: all sums of 3 points
            let mut sums: BTreeSet<Vec<i64>> = BTreeSet::new();
            for x in &p.points {
                for y in &p.points {
                    for z in &p.points {
                        sums.insert(
                            x.iter().zip(y).zip(z).map(|((a, b), c)| a + b + c).collect(),
                        );
                    }
                }
            }
            let dilated: BTreeSet<Vec<i64>> =
                p.dilate_points(3, DEFAULT_ENUM_BUDGET).unwrap().into_iter().collect();
            assert_eq!(sums, dilated, "{:?}/{:?}", a, b);
        }
    }
}
