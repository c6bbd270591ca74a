//! Error distributions and sample generation: coefficient-wise
//! discretized Gaussians for the polynomial-basis problem, and spherical
//! Gaussians pushed through the real embedding for the monogenic
//! canonical variant.
//!
//! Every generator is keyed by a 64-bit seed. Sample `i` draws from its
//! own counter-derived stream, so batches are bit-reproducible and can be
//! generated in parallel without coordination.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::linalg::Lu;
use crate::geometry::EmbeddingReport;
use crate::modarith::{ResiduePolynomial, RingSpec};

/// Width and hard truncation of the coefficient error distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
    /// Standard deviation of the underlying continuous Gaussian.
    pub sigma: f64,
    /// Rejection bound as a multiple of sigma (defaults to 2).
    pub truncation_multiplier: f64,
}

impl GaussianSpec {
    pub fn new(sigma: f64) -> Result<Self> {
        Self::with_truncation(sigma, 2.0)
    }

    pub fn with_truncation(sigma: f64, truncation_multiplier: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::Precondition("sigma must be positive".into()));
        }
        if !(truncation_multiplier > 0.0) || !truncation_multiplier.is_finite() {
            return Err(Error::Precondition(
                "truncation multiplier must be positive".into(),
            ));
        }
        Ok(GaussianSpec { sigma, truncation_multiplier })
    }

    /// Hard truncation bound `B = floor(multiplier * sigma)`; every
    /// sampled coefficient satisfies `|e| <= B`.
    pub fn bound(&self) -> i64 {
        (self.truncation_multiplier * self.sigma).floor() as i64
    }
}

/// Whether a batch was generated with a planted secret or uniformly.
/// Recorded for harnesses only; attack code never reads it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Valid,
    Uniform,
}

/// Which discretization produced the error coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Discretization {
    /// Round-to-nearest per polynomial coefficient with hard rejection
    /// beyond the truncation bound.
    CoefficientRounded,
    /// Spherical Gaussian in embedded coordinates, mapped back through the
    /// inverse embedding and rounded per coefficient (no truncation).
    MinkowskiRounded,
    /// No error distribution: both components uniform.
    Uniform,
}

#[derive(Debug, Clone)]
pub struct PlweSample {
    pub a: ResiduePolynomial,
    pub b: ResiduePolynomial,
}

#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub ring: RingSpec,
    pub samples: Vec<PlweSample>,
    pub provenance: Provenance,
    pub discretization: Discretization,
    pub seed: u64,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Stream `index` of the batch keyed by `seed`. Stream values reserve the
/// top bit for auxiliary draws (secrets, dither) so sample streams and
/// helper streams never collide.
pub(crate) fn sample_stream(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub(crate) const SECRET_STREAM: u64 = 1 << 63;
pub(crate) const DITHER_STREAM: u64 = (1 << 63) + 1;

/// One coefficient: a continuous normal deviate of width `sigma`, rounded
/// to the nearest integer, rejected and redrawn while outside the bound.
pub fn sample_error_coeff<R: Rng + ?Sized>(spec: &GaussianSpec, rng: &mut R) -> i64 {
    let b = spec.bound();
    let normal = Normal::new(0.0, spec.sigma).expect("validated sigma");
    loop {
        let v = normal.sample(rng).round() as i64;
        if v.abs() <= b {
            return v;
        }
    }
}

/// Derive a uniform secret from the batch seed's reserved stream.
pub fn random_secret(ring: &RingSpec, seed: u64) -> ResiduePolynomial {
    let mut rng = sample_stream(seed, SECRET_STREAM);
    ring.uniform_element(&mut rng)
}

/// Planted batch: `a` uniform, `b = a*s + e` with coefficient-wise
/// discretized Gaussian error.
pub fn gen_plwe_batch(
    ring: &RingSpec,
    secret: &ResiduePolynomial,
    spec: &GaussianSpec,
    count: usize,
    seed: u64,
) -> SampleBatch {
    let n = ring.degree();
    let samples: Vec<PlweSample> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_stream(seed, i);
            let a = ring.uniform_element(&mut rng);
            let e_signed: Vec<i64> = (0..n).map(|_| sample_error_coeff(spec, &mut rng)).collect();
            let e = ring.element_from_signed(&e_signed);
            let b = ring.add(&ring.mul(&a, secret), &e);
            PlweSample { a, b }
        })
        .collect();
    SampleBatch {
        ring: ring.clone(),
        samples,
        provenance: Provenance::Valid,
        discretization: Discretization::CoefficientRounded,
        seed,
    }
}

/// Both components uniform and independent.
pub fn gen_uniform_batch(ring: &RingSpec, count: usize, seed: u64) -> SampleBatch {
    let samples: Vec<PlweSample> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_stream(seed, i);
            let a = ring.uniform_element(&mut rng);
            let b = ring.uniform_element(&mut rng);
            PlweSample { a, b }
        })
        .collect();
    SampleBatch {
        ring: ring.clone(),
        samples,
        provenance: Provenance::Uniform,
        discretization: Discretization::Uniform,
        seed,
    }
}

/// Canonical-embedding batch for monogenic rings: the error is a
/// spherical Gaussian of width `sigma` in embedded coordinates, mapped to
/// power-basis coordinates by the inverse embedding matrix and rounded.
///
/// The dual twist (the `1/f'(alpha)` scaling of the dual lattice) is a
/// fixed known scalar in this model and is left to the analysis layer
/// rather than folded into the samples.
pub fn gen_rlwe_batch_monogenic(
    ring: &RingSpec,
    embedding: &EmbeddingReport,
    secret: &ResiduePolynomial,
    sigma: f64,
    count: usize,
    seed: u64,
) -> Result<SampleBatch> {
    if embedding.f != *ring.f() {
        return Err(Error::Precondition(
            "embedding report was computed for a different polynomial".into(),
        ));
    }
    if embedding.condition_number > 1e12 {
        return Err(Error::Numeric(format!(
            "embedding matrix too ill-conditioned (cond = {:.3e})",
            embedding.condition_number
        )));
    }
    if !(sigma > 0.0) {
        return Err(Error::Precondition("sigma must be positive".into()));
    }
    let n = ring.degree();
    let lu = Lu::factor(&embedding.matrix)?;
    let normal = Normal::new(0.0, sigma).expect("validated sigma");
    let samples: Vec<PlweSample> = (0..count as u64)
        .map(|i| {
            let mut rng = sample_stream(seed, i);
            let a = ring.uniform_element(&mut rng);
            let mink: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
            let mut power = vec![0.0; n];
            lu.solve(&mink, &mut power);
            let e_signed: Vec<i64> = power.iter().map(|&v| v.round() as i64).collect();
            let e = ring.element_from_signed(&e_signed);
            let b = ring.add(&ring.mul(&a, secret), &e);
            PlweSample { a, b }
        })
        .collect();
    Ok(SampleBatch {
        ring: ring.clone(),
        samples,
        provenance: Provenance::Valid,
        discretization: Discretization::MinkowskiRounded,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::{IntPolynomial, PrimeModulus};

    fn ring_x2x1_mod7() -> RingSpec {
        RingSpec::new(
            IntPolynomial::from_i64(&[1, 1, 1]),
            PrimeModulus::new(7).unwrap(),
        )
        .unwrap()
    }

    fn ring_n4_q257() -> RingSpec {
        // x^4 + 1 splits mod 257 (257 = 1 mod 8)
        RingSpec::new(
            IntPolynomial::from_i64(&[1, 0, 0, 0, 1]),
            PrimeModulus::new(257).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn tiny_sigma_always_zero() {
        let spec = GaussianSpec::new(0.0001).unwrap();
        let mut rng = sample_stream(1, 0);
        for _ in 0..1000 {
            assert_eq!(sample_error_coeff(&spec, &mut rng), 0);
        }
    }

    #[test]
    fn truncation_is_hard_and_variance_tracks_sigma() {
        let spec = GaussianSpec::new(8.0).unwrap();
        assert_eq!(spec.bound(), 16);
        let mut rng = sample_stream(2, 0);
        let draws: Vec<i64> = (0..1_000_000)
            .map(|_| sample_error_coeff(&spec, &mut rng))
            .collect();
        assert!(draws.iter().all(|&v| v.abs() <= 16));
        let mean = draws.iter().sum::<i64>() as f64 / draws.len() as f64;
        let var = draws
            .iter()
            .map(|&v| (v as f64 - mean).powi(2))
            .sum::<f64>()
            / draws.len() as f64;
        // truncated-normal variance at +-2 sigma: sigma^2 (1 - 2*2*phi(2)/(Phi(2)-Phi(-2)))
        // plus a small rounding contribution (~1/12)
        let phi2 = (-2.0f64).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mass = 0.9544997361036416;
        let expect = 64.0 * (1.0 - 4.0 * phi2 / mass) + 1.0 / 12.0;
        assert!(
            (var.sqrt() - expect.sqrt()).abs() / expect.sqrt() < 0.03,
            "std {} vs {}",
            var.sqrt(),
            expect.sqrt()
        );
    }

    #[test]
    fn zero_sigma_limit_gives_exact_products() {
        let ring = ring_x2x1_mod7();
        let spec = GaussianSpec::new(0.0001).unwrap();
        let s = random_secret(&ring, 3);
        let batch = gen_plwe_batch(&ring, &s, &spec, 20, 3);
        for sample in &batch.samples {
            assert_eq!(sample.b, ring.mul(&sample.a, &s));
        }
    }

    #[test]
    fn zero_secret_exposes_bounded_error() {
        let ring = ring_x2x1_mod7();
        let spec = GaussianSpec::new(1.0).unwrap();
        let b = spec.bound();
        let zero = ring.zero();
        let batch = gen_plwe_batch(&ring, &zero, &spec, 200, 4);
        for sample in &batch.samples {
            for &c in sample.b.coeffs() {
                let m = ring.q().minimal_residue(c);
                assert!(m.abs() <= b, "coefficient {m} beyond bound {b}");
            }
        }
    }

    #[test]
    fn determinism_and_seed_sensitivity() {
        let ring = ring_n4_q257();
        let spec = GaussianSpec::new(1.0).unwrap();
        let s = random_secret(&ring, 7);
        let b1 = gen_plwe_batch(&ring, &s, &spec, 10, 7);
        let b2 = gen_plwe_batch(&ring, &s, &spec, 10, 7);
        for (x, y) in b1.samples.iter().zip(&b2.samples) {
            assert_eq!(x.a, y.a);
            assert_eq!(x.b, y.b);
        }
        let b3 = gen_plwe_batch(&ring, &s, &spec, 10, 8);
        assert!(b1.samples.iter().zip(&b3.samples).any(|(x, y)| x.a != y.a));

        let u1 = gen_uniform_batch(&ring, 10, 5);
        let u2 = gen_uniform_batch(&ring, 10, 5);
        for (x, y) in u1.samples.iter().zip(&u2.samples) {
            assert_eq!(x.a, y.a);
            assert_eq!(x.b, y.b);
        }
    }

    #[test]
    fn empty_batches_are_fine() {
        let ring = ring_x2x1_mod7();
        let spec = GaussianSpec::new(1.0).unwrap();
        let s = random_secret(&ring, 1);
        assert_eq!(gen_plwe_batch(&ring, &s, &spec, 0, 1).len(), 0);
        assert_eq!(gen_uniform_batch(&ring, 0, 1).len(), 0);
    }

    #[test]
    fn uniform_batch_frequencies_are_flat() {
        let ring = ring_x2x1_mod7();
        let batch = gen_uniform_batch(&ring, 50_000, 11);
        let mut counts = [0u64; 7];
        for s in &batch.samples {
            for &c in s.a.coeffs().iter().chain(s.b.coeffs()) {
                counts[c as usize] += 1;
            }
        }
        let total: u64 = counts.iter().sum();
        let expect = total as f64 / 7.0;
        let sd = (expect * (1.0 - 1.0 / 7.0)).sqrt();
        for (v, &c) in counts.iter().enumerate() {
            assert!(
                (c as f64 - expect).abs() < 5.0 * sd,
                "value {v} count {c} vs {expect}"
            );
        }
    }

    #[test]
    fn rlwe_two_power_cyclotomic_matches_plwe_scaling() {
        // for x^4 + 1 the embedding is a scaled rotation, so the canonical
        // batch's coefficient errors match a coefficient-Gaussian of width
        // sigma / |det M|^(1/n)
        let ring = ring_n4_q257();
        let rep = crate::geometry::spectral_distortion(ring.f()).unwrap();
        let sigma = 8.0;
        let s = ring.zero(); // expose the raw error
        let batch = gen_rlwe_batch_monogenic(&ring, &rep, &s, sigma, 30_000, 123).unwrap();
        let mut values = Vec::new();
        for sample in &batch.samples {
            for &c in sample.b.coeffs() {
                values.push(ring.q().minimal_residue(c) as f64);
            }
        }
        let nvals = values.len() as f64;
        let mean = values.iter().sum::<f64>() / nvals;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / nvals;
        let expected_sigma = sigma / (rep.log_abs_det / 4.0).exp();
        // rounding adds ~1/12
        let expected_var = expected_sigma * expected_sigma + 1.0 / 12.0;
        assert!(
            (var - expected_var).abs() / expected_var < 0.05,
            "var {var} vs {expected_var}"
        );
        // sigma -> 0 limit
        let tiny = gen_rlwe_batch_monogenic(&ring, &rep, &s, 1e-6, 50, 9).unwrap();
        for sample in &tiny.samples {
            assert_eq!(sample.b, ring.zero());
        }
        // reproducibility
        let again = gen_rlwe_batch_monogenic(&ring, &rep, &s, sigma, 5, 123).unwrap();
        for (x, y) in again.samples.iter().zip(&batch.samples) {
            assert_eq!(x.a, y.a);
            assert_eq!(x.b, y.b);
        }
    }
}
