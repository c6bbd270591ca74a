//! Arbitrary-precision integer polynomials, constant term first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::modarith::PrimeModulus;

/// A polynomial over `Z`, stored dense with the constant term first and no
/// trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `x^k`.
    pub fn x_pow(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        Self::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading_coefficient(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.leading_coefficient().is_one()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation of the coefficient-wise reduction mod `q`.
    pub fn eval_mod(&self, alpha: u64, q: &PrimeModulus) -> u64 {
        let mut acc = 0u64;
        for c in self.coeffs.iter().rev() {
            acc = q.add(q.mul(acc, alpha), reduce_bigint(c, q.get()));
        }
        acc
    }

    /// Coefficients reduced into `[0, q)`, length `deg + 1`.
    pub fn reduce_mod(&self, q: &PrimeModulus) -> Vec<u64> {
        self.coeffs.iter().map(|c| reduce_bigint(c, q.get())).collect()
    }

    /// Coefficients reduced mod a small prime `p` (no primality requirement).
    pub fn reduce_mod_u64(&self, p: u64) -> Vec<u64> {
        self.coeffs.iter().map(|c| reduce_bigint(c, p)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.coeff(i) + other.coeff(i);
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.coeff(i) - other.coeff(i);
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Add a constant.
    pub fn add_constant(&self, k: &BigInt) -> Self {
        let mut c = self.coeffs.clone();
        c[0] += k;
        Self::new(c)
    }

    /// `prod (x - r_i)` by a balanced product tree.
    pub fn from_roots(roots: &[BigInt]) -> Self {
        fn build(roots: &[BigInt]) -> IntPolynomial {
            match roots.len() {
                0 => IntPolynomial::one(),
                1 => IntPolynomial::new(vec![-&roots[0], BigInt::one()]),
                n => {
                    let (lo, hi) = roots.split_at(n / 2);
                    build(lo).mul(&build(hi))
                }
            }
        }
        build(roots)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i as u64 + 1))
                .collect(),
        )
    }

    /// Exact division; `None` when the divisor does not divide exactly.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dn, dd) = (self.degree()?, divisor.degree()?);
        if dn < dd {
            return None;
        }
        let lead = divisor.leading_coefficient();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![BigInt::zero(); dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quo[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(quo))
    }

    /// Substitute `x -> x + a`.
    pub fn shift(&self, a: &BigInt) -> Self {
        // Horner on coefficients: p(x + a)
        let mut acc = IntPolynomial::zero();
        let lin = IntPolynomial::new(vec![a.clone(), BigInt::one()]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add_constant(c);
        }
        acc
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }
}

#[inline]
pub(crate) fn reduce_bigint(c: &BigInt, m: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(m));
    // mod_floor of a positive modulus is non-negative and < m
    let digits = r.to_u64_digits().1;
    digits.first().copied().unwrap_or(0)
}

/// Resultant of two integer polynomials by fraction-free (Bareiss)
/// elimination of the Sylvester matrix. Exact over `Z`.
pub fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> Result<BigInt> {
    let n = f
        .degree()
        .ok_or_else(|| Error::Precondition("resultant of zero polynomial".into()))?;
    let m = g
        .degree()
        .ok_or_else(|| Error::Precondition("resultant of zero polynomial".into()))?;
    if n == 0 {
        return Ok(f.coeffs[0].clone().pow(m as u32));
    }
    if m == 0 {
        return Ok(g.coeffs[0].clone().pow(n as u32));
    }
    let size = n + m;
    let mut a = vec![vec![BigInt::zero(); size]; size];
    // m rows of f's coefficients (highest degree first), then n rows of g's
    for row in 0..m {
        for k in 0..=n {
            a[row][row + k] = f.coeffs[n - k].clone();
        }
    }
    for row in 0..n {
        for k in 0..=m {
            a[m + row][row + k] = g.coeffs[m - k].clone();
        }
    }
    // Bareiss fraction-free elimination; determinant ends up in a[size-1][size-1].
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..size - 1 {
        if a[k][k].is_zero() {
            let swap = (k + 1..size).find(|&r| !a[r][k].is_zero());
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                let (quo, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero());
                a[i][j] = quo;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[size - 1][size - 1].clone();
    Ok(if sign < 0 { -det } else { det })
}

/// `disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
pub fn discriminant(f: &IntPolynomial) -> Result<BigInt> {
    let n = match f.degree() {
        Some(n) if n >= 2 => n,
        _ => {
            return Err(Error::Precondition(
                "discriminant requires degree >= 2".into(),
            ))
        }
    };
    let res = resultant(f, &f.derivative())?;
    let (res, rem) = res.div_rem(f.leading_coefficient());
    debug_assert!(rem.is_zero());
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -res } else { res })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = poly(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(poly(&[0, 0]).degree(), None);
    }

    #[test]
    fn eval_mod_examples() {
        let q5 = PrimeModulus::new(5).unwrap();
        assert_eq!(poly(&[1, 0, 1]).eval_mod(2, &q5), 0); // x^2+1 at 2 mod 5
        assert_eq!(poly(&[0]).eval_mod(3, &q5), 0);
        let q23 = PrimeModulus::new(23).unwrap();
        // x^3 - x + 1 at 3: 27 - 3 + 1 = 25 = 2 mod 23
        assert_eq!(poly(&[1, -1, 0, 1]).eval_mod(3, &q23), 2);
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&poly(&[-2, 0, 1])).unwrap(), BigInt::from(8));
        assert_eq!(
            discriminant(&poly(&[1, -1, 0, 1])).unwrap(),
            BigInt::from(-23)
        );
        assert_eq!(discriminant(&poly(&[1, 1, 1])).unwrap(), BigInt::from(-3));
    }

    #[test]
    fn discriminant_of_split_products_is_square_of_differences() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..32 {
            let deg = rng.random_range(2..=6usize);
            let mut roots = std::collections::BTreeSet::new();
            while roots.len() < deg {
                roots.insert(rng.random_range(-12i64..=12));
            }
            let roots: Vec<BigInt> = roots.into_iter().map(BigInt::from).collect();
            let f = IntPolynomial::from_roots(&roots);
            let mut expect = BigInt::one();
            for i in 0..deg {
                for j in i + 1..deg {
                    let d = &roots[i] - &roots[j];
                    expect *= &d * &d;
                }
            }
            assert_eq!(discriminant(&f).unwrap(), expect);
        }
    }

    #[test]
    fn shift_matches_direct_expansion() {
        // (x-2)^4 + 7 shifted by +2 is x^4 + 7
        let f = IntPolynomial::from_roots(&[BigInt::from(2); 4]).add_constant(&BigInt::from(7));
        let shifted = f.shift(&BigInt::from(2));
        assert_eq!(shifted, poly(&[7, 0, 0, 0, 1]));
    }

    #[test]
    fn div_exact_roundtrip() {
        let a = poly(&[1, 2, 3]);
        let b = poly(&[-4, 0, 0, 5]);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(prod.add_constant(&BigInt::one()).div_exact(&a).is_none());
    }

    #[test]
    fn eval_is_ring_homomorphism_mod_q() {
        let q = PrimeModulus::new(10007).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let rand_poly = |rng: &mut StdRng| {
                let deg = rng.random_range(0..6usize);
                IntPolynomial::new(
                    (0..=deg)
                        .map(|_| BigInt::from(rng.random_range(-1000i64..1000)))
                        .collect(),
                )
            };
            let (p, r, s) = (rand_poly(&mut rng), rand_poly(&mut rng), rand_poly(&mut rng));
            let alpha = rng.random_range(0..q.get());
            let lhs = p.mul(&r).add(&s).eval_mod(alpha, &q);
            let rhs = q.add(
                q.mul(p.eval_mod(alpha, &q), r.eval_mod(alpha, &q)),
                s.eval_mod(alpha, &q),
            );
            assert_eq!(lhs, rhs);
        }
    }
}
