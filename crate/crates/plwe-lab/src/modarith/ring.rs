//! The quotient ring `P_q = F_q[x]/(f)` with `f` monic, irreducible over
//! `Z`, and completely split mod `q`.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::modarith::irreducibility::{irreducibility_check, IrreducibilityVerdict};
use crate::modarith::polymod as pm;
use crate::modarith::roots::find_roots_mod_q;
use crate::modarith::{IntPolynomial, PrimeModulus};

/// The pair `(f, q)` together with the full root set of `f` mod `q`.
#[derive(Debug, Clone)]
pub struct RingSpec {
    f: IntPolynomial,
    q: PrimeModulus,
    roots: Vec<u64>,
    f_mod_q: Vec<u64>,
}

impl RingSpec {
    /// Validates complete splitting and requires an irreducibility
    /// certificate for `f`.
    pub fn new(f: IntPolynomial, q: PrimeModulus) -> Result<Self> {
        match irreducibility_check(&f) {
            IrreducibilityVerdict::Irreducible => {}
            IrreducibilityVerdict::Composite => {
                return Err(Error::Precondition(
                    "defining polynomial is composite over the integers".into(),
                ))
            }
            IrreducibilityVerdict::Unknown => {
                return Err(Error::Precondition(
                    "irreducibility of the defining polynomial could not be certified; \
                     use new_assume_irreducible if it is known by construction"
                        .into(),
                ))
            }
        }
        Self::new_assume_irreducible(f, q)
    }

    /// Skips the irreducibility certificate (for rings irreducible by
    /// construction); still validates monicity and complete splitting.
    pub fn new_assume_irreducible(f: IntPolynomial, q: PrimeModulus) -> Result<Self> {
        let n = f
            .degree()
            .ok_or_else(|| Error::Precondition("zero defining polynomial".into()))?;
        if n < 1 {
            return Err(Error::Precondition("defining polynomial is constant".into()));
        }
        if !f.is_monic() {
            return Err(Error::Precondition("defining polynomial must be monic".into()));
        }
        let roots = find_roots_mod_q(&f, &q);
        if roots.len() != n {
            return Err(Error::Precondition(format!(
                "f does not split completely mod {}: found {} of {} roots",
                q.get(),
                roots.len(),
                n
            )));
        }
        let f_mod_q = f.reduce_mod(&q);
        Ok(RingSpec { f, q, roots, f_mod_q })
    }

    /// Reassemble from parts that were validated before (deserialization).
    pub(crate) fn from_trusted_parts(f: IntPolynomial, q: PrimeModulus, roots: Vec<u64>) -> Result<Self> {
        for &r in &roots {
            if f.eval_mod(r, &q) != 0 {
                return Err(Error::Precondition(format!("{r} is not a root of f mod {}", q.get())));
            }
        }
        let n = f.degree().unwrap_or(0);
        if roots.len() != n || roots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(
                "stored root set is not a sorted complete splitting".into(),
            ));
        }
        let f_mod_q = f.reduce_mod(&q);
        Ok(RingSpec { f, q, roots, f_mod_q })
    }

    pub fn f(&self) -> &IntPolynomial {
        &self.f
    }

    pub fn q(&self) -> &PrimeModulus {
        &self.q
    }

    pub fn degree(&self) -> usize {
        self.f.degree().unwrap()
    }

    /// Sorted roots of `f` mod `q`; complete by construction.
    pub fn roots(&self) -> &[u64] {
        &self.roots
    }

    pub fn is_root(&self, alpha: u64) -> bool {
        self.roots.binary_search(&alpha).is_ok()
    }

    pub fn zero(&self) -> ResiduePolynomial {
        ResiduePolynomial {
            coeffs: vec![0; self.degree()],
        }
    }

    pub fn element(&self, coeffs: Vec<u64>) -> Result<ResiduePolynomial> {
        if coeffs.len() != self.degree() {
            return Err(Error::Precondition(format!(
                "element needs exactly {} coefficients, got {}",
                self.degree(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= self.q.get()) {
            return Err(Error::Precondition("coefficient out of range [0, q)".into()));
        }
        Ok(ResiduePolynomial { coeffs })
    }

    /// Element from signed coefficients (reduced mod q), zero-padded.
    pub fn element_from_signed(&self, coeffs: &[i64]) -> ResiduePolynomial {
        let mut out = vec![0u64; self.degree()];
        for (i, &c) in coeffs.iter().enumerate().take(self.degree()) {
            out[i] = self.q.reduce_i64(c);
        }
        ResiduePolynomial { coeffs: out }
    }

    pub fn uniform_element(&self, rng: &mut dyn RngCore) -> ResiduePolynomial {
        use rand::Rng;
        ResiduePolynomial {
            coeffs: (0..self.degree()).map(|_| rng.random_range(0..self.q.get())).collect(),
        }
    }

    pub fn add(&self, a: &ResiduePolynomial, b: &ResiduePolynomial) -> ResiduePolynomial {
        ResiduePolynomial {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.q.add(x, y))
                .collect(),
        }
    }

    pub fn sub(&self, a: &ResiduePolynomial, b: &ResiduePolynomial) -> ResiduePolynomial {
        ResiduePolynomial {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.q.sub(x, y))
                .collect(),
        }
    }

    /// Product in `F_q[x]/(f)`.
    pub fn mul(&self, a: &ResiduePolynomial, b: &ResiduePolynomial) -> ResiduePolynomial {
        let mut prod = pm::mul(&a.coeffs, &b.coeffs, &self.q);
        prod = pm::rem_monic(&prod, &self.f_mod_q, &self.q);
        prod.resize(self.degree(), 0);
        ResiduePolynomial { coeffs: prod }
    }

    /// Evaluation at a residue (the projection to `F_q` when `alpha` is a
    /// root of `f`).
    pub fn eval(&self, p: &ResiduePolynomial, alpha: u64) -> u64 {
        pm::eval(&p.coeffs, alpha, &self.q)
    }
}

/// An element of `P_q`: exactly `deg f` coefficients in `[0, q)`,
/// constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResiduePolynomial {
    coeffs: Vec<u64>,
}

impl ResiduePolynomial {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub(crate) fn from_raw(coeffs: Vec<u64>) -> Self {
        ResiduePolynomial { coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_ring() -> RingSpec {
        // x^2 + x + 1 splits mod 7 (roots 2, 4)
        RingSpec::new(
            IntPolynomial::from_i64(&[1, 1, 1]),
            PrimeModulus::new(7).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn builds_and_reports_roots() {
        let ring = small_ring();
        assert_eq!(ring.roots(), &[2, 4]);
        assert!(ring.is_root(2));
        assert!(!ring.is_root(3));
    }

    #[test]
    fn rejects_non_splitting() {
        let err = RingSpec::new(
            IntPolynomial::from_i64(&[1, 0, 1]),
            PrimeModulus::new(7).unwrap(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("split"));
    }

    #[test]
    fn mul_reduces_by_f() {
        let ring = small_ring();
        // x * x = x^2 = -x - 1 = 6x + 6 mod (x^2+x+1, 7)
        let x = ring.element(vec![0, 1]).unwrap();
        let sq = ring.mul(&x, &x);
        assert_eq!(sq.coeffs(), &[6, 6]);
    }

    #[test]
    fn eval_commutes_with_mul_at_roots() {
        let ring = small_ring();
        let a = ring.element(vec![3, 5]).unwrap();
        let b = ring.element(vec![6, 2]).unwrap();
        let prod = ring.mul(&a, &b);
        for &alpha in ring.roots() {
            let lhs = ring.eval(&prod, alpha);
            let rhs = ring.q().mul(ring.eval(&a, alpha), ring.eval(&b, alpha));
            assert_eq!(lhs, rhs);
        }
    }
}
