//! All complex roots of a squarefree integer polynomial by simultaneous
//! (Aberth-Ehrlich) iteration, with embedding-order classification.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::modarith::{polymod as pm, IntPolynomial};

/// Complex roots arranged in embedding order: the `s1` real roots first
/// (ascending), then one representative per conjugate pair (positive
/// imaginary part), then their conjugates in matching order.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub s1: usize,
    pub s2: usize,
}

impl RootSet {
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// The pair representatives, i.e. roots `s1 .. s1 + s2`.
    pub fn pair_representatives(&self) -> &[Complex64] {
        &self.roots[self.s1..self.s1 + self.s2]
    }
}

const MAX_ITER: usize = 500;

pub fn complex_roots(f: &IntPolynomial) -> Result<RootSet> {
    let n = f
        .degree()
        .ok_or_else(|| Error::Precondition("cannot root-find the zero polynomial".into()))?;
    if n < 1 {
        return Err(Error::Precondition("degree must be at least 1".into()));
    }
    ensure_squarefree(f)?;
    let coeffs: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|c| {
            c.to_f64().filter(|v| v.is_finite()).ok_or_else(|| {
                Error::Numeric("coefficient exceeds double-precision range".into())
            })
        })
        .collect::<Result<_>>()?;

    let roots = aberth(&coeffs)?;
    classify(f, roots)
}

/// Squarefreeness certificate: gcd(f, f') = 1 modulo some prime not
/// dividing the leading coefficient proves gcd 1 over the rationals;
/// failure at several primes means a genuinely repeated root.
fn ensure_squarefree(f: &IntPolynomial) -> Result<()> {
    use crate::modarith::PrimeModulus;
    let fd = f.derivative();
    if fd.is_zero() {
        return Err(Error::Precondition("repeated roots: derivative vanishes".into()));
    }
    for qv in [1_000_003u64, 1_000_033, 1_000_037, 1_000_039, 1_000_081] {
        let q = PrimeModulus::new(qv).unwrap();
        let fq = f.reduce_mod(&q);
        let fdq = fd.reduce_mod(&q);
        if pm::deg(&fq) != f.degree() {
            continue; // q divides the leading coefficient
        }
        let g = pm::gcd(&fq, &fdq, &q);
        if pm::deg(&g) == Some(0) {
            return Ok(());
        }
    }
    Err(Error::Precondition(
        "repeated roots: gcd(f, f') is nontrivial at every certificate prime".into(),
    ))
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    // value and derivative together
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn aberth(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    // Cauchy-style inclusion radius
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0f64, f64::max);
    // perturbed-circle start; the golden-angle offset avoids symmetric
    // stalemates on e.g. x^n + c
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.61803398875;
            let r = radius * (0.85 + 0.13 * ((k * 2654435761 % 1000) as f64 / 1000.0));
            Complex64::from_polar(r, angle)
        })
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITER {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(coeffs, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() == 0.0 {
                Complex64::new(1e-12, 1e-12)
            } else {
                p / dp
            };
            let mut rep = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let d = z[k] - z[j];
                    if d.norm() > 0.0 {
                        rep += Complex64::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * rep;
            let w = if denom.norm() == 0.0 { newton } else { newton / denom };
            z[k] -= w;
            let rel = w.norm() / (1.0 + z[k].norm());
            max_step = max_step.max(rel);
        }
        if max_step < 1e-13 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric(format!(
            "root iteration did not converge within {MAX_ITER} sweeps"
        )));
    }
    // Newton polish
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(coeffs, *zk);
            if dp.norm() > 0.0 {
                *zk -= p / dp;
            }
        }
    }
    Ok(z)
}

fn classify(f: &IntPolynomial, raw: Vec<Complex64>) -> Result<RootSet> {
    let n = raw.len();
    // residual validation against the coefficient scale
    let coeffs_abs: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::MAX).abs())
        .collect();
    for &z in &raw {
        let scale: f64 = coeffs_abs
            .iter()
            .enumerate()
            .map(|(i, a)| a * z.norm().max(1.0).powi(i as i32))
            .sum();
        let coeffs_f64: Vec<f64> = f.coeffs().iter().map(|c| c.to_f64().unwrap()).collect();
        let (p, _) = horner(&coeffs_f64, z);
        if p.norm() > 1e-8 * scale.max(1.0) {
            return Err(Error::Numeric(format!(
                "root residual {:.3e} exceeds tolerance at {z}",
                p.norm()
            )));
        }
    }

    let mut reals: Vec<f64> = Vec::new();
    let mut upper: Vec<Complex64> = Vec::new();
    let mut lower: Vec<Complex64> = Vec::new();
    for z in raw {
        if z.im.abs() <= 1e-9 * (1.0 + z.norm()) {
            reals.push(z.re);
        } else if z.im > 0.0 {
            upper.push(z);
        } else {
            lower.push(z);
        }
    }
    if upper.len() != lower.len() {
        return Err(Error::Numeric(
            "conjugate pairing failed: unbalanced half-planes".into(),
        ));
    }
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    upper.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    // greedy nearest-conjugate matching
    let mut paired_lower: Vec<Complex64> = Vec::with_capacity(upper.len());
    let mut pool = lower;
    for &u in &upper {
        let target = u.conj();
        let (best, _) = pool
            .iter()
            .enumerate()
            .map(|(i, &w)| (i, (w - target).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .ok_or_else(|| Error::Numeric("conjugate pairing failed".into()))?;
        let w = pool.swap_remove(best);
        if (w - target).norm() > 1e-6 * (1.0 + u.norm()) {
            return Err(Error::Numeric(format!(
                "conjugate pairing tolerance exceeded: {u} vs {w}"
            )));
        }
        paired_lower.push(w);
    }
    let s1 = reals.len();
    let s2 = upper.len();
    if s1 + 2 * s2 != n {
        return Err(Error::Numeric("embedding signature mismatch".into()));
    }
    let mut roots: Vec<Complex64> = reals.into_iter().map(|r| Complex64::new(r, 0.0)).collect();
    roots.extend(upper);
    roots.extend(paired_lower);
    Ok(RootSet { roots, s1, s2 })
}
