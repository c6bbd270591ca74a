//! Does a subset of the ring cover all of `F_q` under evaluation at a
//! root? Exhaustive for explicit sets and coefficient boxes, sampled with
//! a stopping rule otherwise.

use crate::error::{Error, Result};
use crate::modarith::{ResiduePolynomial, RingSpec};
use crate::sampling::{sample_error_coeff, sample_stream, GaussianSpec};

/// The set of ring elements whose image under evaluation is examined.
pub enum ImageSource<'a> {
    /// An explicit list.
    Explicit(&'a [ResiduePolynomial]),
    /// All polynomials whose coefficients lie in `[lo, hi]` (as signed
    /// integers). The image is computed exactly by iterated sumsets
    /// without enumerating the box.
    CoefficientBox { lo: i64, hi: i64 },
    /// Polynomials drawn coefficient-wise from the error distribution;
    /// stops at full coverage or after `max_draws`.
    Sampled {
        spec: GaussianSpec,
        max_draws: u64,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct SmearingReport {
    /// Whether the image covers all of `F_q`. For the sampled source this
    /// is a one-sided answer: `false` means not covered within the draw
    /// budget.
    pub smears: bool,
    pub image_size: usize,
    pub draws_used: Option<u64>,
}

/// Work cap for the exhaustive paths (elementary set operations).
pub const DEFAULT_SMEARING_BUDGET: u64 = 1 << 32;

pub fn check_smearing(
    ring: &RingSpec,
    source: &ImageSource<'_>,
    alpha: u64,
    budget: u64,
) -> Result<SmearingReport> {
    if !ring.is_root(alpha) {
        return Err(Error::Precondition(format!(
            "{alpha} is not a root of the ring polynomial mod {}",
            ring.q().get()
        )));
    }
    let q = *ring.q();
    let qv = q.get();
    if qv > (1 << 28) {
        return Err(Error::Capacity(
            "image bitmap would exceed the exhaustive budget; project and sample instead".into(),
        ));
    }
    match source {
        ImageSource::Explicit(polys) => {
            if polys.len() as u64 > budget {
                return Err(Error::Capacity(format!(
                    "{} evaluations exceed the budget {budget}",
                    polys.len()
                )));
            }
            let mut seen = vec![false; qv as usize];
            let mut size = 0usize;
            for p in polys.iter() {
                let v = ring.eval(p, alpha) as usize;
                if !seen[v] {
                    seen[v] = true;
                    size += 1;
                }
            }
            Ok(SmearingReport {
                smears: size as u64 == qv,
                image_size: size,
                draws_used: None,
            })
        }
        ImageSource::CoefficientBox { lo, hi } => {
            if lo > hi {
                return Err(Error::Precondition("empty coefficient box".into()));
            }
            let n = ring.degree() as u64;
            let width = (hi - lo) as u64 + 1;
            let work = qv
                .checked_mul(n)
                .and_then(|x| x.checked_mul(width))
                .ok_or_else(|| Error::Capacity("coefficient box too large".into()))?;
            if work > budget {
                return Err(Error::Capacity(format!(
                    "sumset walk needs ~{work} operations, over the budget {budget}"
                )));
            }
            // iterated sumset: image of sum_j c_j alpha^j over the box
            let mut reachable = vec![false; qv as usize];
            reachable[0] = true;
            for j in 0..ring.degree() {
                let stride = q.pow(alpha, j as u64);
                let mut next = vec![false; qv as usize];
                for (v, &set) in reachable.iter().enumerate() {
                    if !set {
                        continue;
                    }
                    for c in *lo..=*hi {
                        let delta = q.mul(stride, q.reduce_i64(c));
                        next[q.add(v as u64, delta) as usize] = true;
                    }
                }
                reachable = next;
            }
            let size = reachable.iter().filter(|&&b| b).count();
            Ok(SmearingReport {
                smears: size as u64 == qv,
                image_size: size,
                draws_used: None,
            })
        }
        ImageSource::Sampled { spec, max_draws, seed } => {
            let n = ring.degree();
            let mut seen = vec![false; qv as usize];
            let mut size = 0usize;
            let mut draws = 0u64;
            while draws < *max_draws {
                let mut rng = sample_stream(*seed, draws);
                draws += 1;
                let mut acc = 0u64;
                for _ in 0..n {
                    let e = sample_error_coeff(spec, &mut rng);
                    acc = q.add(q.mul(acc, alpha), q.reduce_i64(e));
                }
                if !seen[acc as usize] {
                    seen[acc as usize] = true;
                    size += 1;
                    if size as u64 == qv {
                        return Ok(SmearingReport {
                            smears: true,
                            image_size: size,
                            draws_used: Some(draws),
                        });
                    }
                }
            }
            Ok(SmearingReport {
                smears: false,
                image_size: size,
                draws_used: Some(draws),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::{IntPolynomial, PrimeModulus};

    fn ring_n4_q257() -> RingSpec {
        RingSpec::new(
            IntPolynomial::from_i64(&[1, 0, 0, 0, 1]),
            PrimeModulus::new(257).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn the_whole_ring_smears() {
        // sampling the full box [-q/2, q/2] is the whole ring
        let ring = ring_n4_q257();
        let alpha = ring.roots()[0];
        let rep = check_smearing(
            &ring,
            &ImageSource::CoefficientBox { lo: -128, hi: 128 },
            alpha,
            DEFAULT_SMEARING_BUDGET,
        )
        .unwrap();
        assert!(rep.smears);
        assert_eq!(rep.image_size, 257);
    }

    #[test]
    fn zero_one_coefficients_at_root_one_stay_small() {
        // ring with root 1: images of {0,1}-coefficient polynomials under
        // evaluation at 1 are the sums 0..n
        let q = PrimeModulus::new(40961).unwrap();
        let f = {
            use num_bigint::BigInt;
            let roots: Vec<BigInt> =
                [1i64, -1, 2, -2].iter().map(|&v| BigInt::from(v)).collect();
            let base = IntPolynomial::from_roots(&roots);
            (1..100u64)
                .map(|i| base.add_constant(&(BigInt::from(40961u64) * BigInt::from(i))))
                .find(|f| {
                    crate::modarith::irreducibility_check(f)
                        == crate::modarith::IrreducibilityVerdict::Irreducible
                })
                .unwrap()
        };
        let ring = RingSpec::new(f, q).unwrap();
        let rep = check_smearing(
            &ring,
            &ImageSource::CoefficientBox { lo: 0, hi: 1 },
            1,
            DEFAULT_SMEARING_BUDGET,
        )
        .unwrap();
        assert!(!rep.smears);
        assert_eq!(rep.image_size, 5); // sums 0..4
    }

    #[test]
    fn box_image_matches_brute_force_enumeration() {
        let ring = ring_n4_q257();
        let q = *ring.q();
        // pick a root of order 4 if present, else any root
        let alpha = *ring
            .roots()
            .iter()
            .find(|&&r| crate::modarith::element_order(r, &q).unwrap() == 4)
            .unwrap_or(&ring.roots()[0]);
        let rep = check_smearing(
            &ring,
            &ImageSource::CoefficientBox { lo: -2, hi: 2 },
            alpha,
            DEFAULT_SMEARING_BUDGET,
        )
        .unwrap();
        // independent brute force over all 5^4 coefficient vectors
        let mut seen = std::collections::BTreeSet::new();
        for c0 in -2i64..=2 {
            for c1 in -2i64..=2 {
                for c2 in -2i64..=2 {
                    for c3 in -2i64..=2 {
                        let mut acc = 0u64;
                        for &c in &[c3, c2, c1, c0] {
                            acc = q.add(q.mul(acc, alpha), q.reduce_i64(c));
                        }
                        seen.insert(acc);
                    }
                }
            }
        }
        assert_eq!(rep.image_size, seen.len());
        assert_eq!(rep.smears, seen.len() == 257);
    }

    #[test]
    fn sampled_source_covers_small_fields() {
        let ring = ring_n4_q257();
        let alpha = ring.roots()[0];
        let spec = GaussianSpec::new(40.0).unwrap();
        let rep = check_smearing(
            &ring,
            &ImageSource::Sampled { spec, max_draws: 200_000, seed: 5 },
            alpha,
            DEFAULT_SMEARING_BUDGET,
        )
        .unwrap();
        assert!(rep.smears, "covered only {} of 257", rep.image_size);
        assert!(rep.draws_used.unwrap() <= 200_000);
    }
}
