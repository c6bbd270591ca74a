//! Exact cyclotomic polynomials by iterated division.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::modarith::IntPolynomial;

/// `Phi_r`, computed as `(x^r - 1) / prod_{d | r, d < r} Phi_d` with exact
/// integer division throughout.
pub fn cyclotomic_poly(r: u64) -> IntPolynomial {
    assert!(r >= 1);
    let mut cache: HashMap<u64, IntPolynomial> = HashMap::new();
    cyclotomic_cached(r, &mut cache)
}

fn cyclotomic_cached(r: u64, cache: &mut HashMap<u64, IntPolynomial>) -> IntPolynomial {
    if let Some(p) = cache.get(&r) {
        return p.clone();
    }
    let result = if r == 1 {
        IntPolynomial::from_i64(&[-1, 1])
    } else {
        // x^r - 1
        let mut num = IntPolynomial::x_pow(r as usize);
        num = num.add_constant(&(-BigInt::one()));
        let mut den = IntPolynomial::one();
        for d in 1..=r / 2 {
            if r % d == 0 {
                den = den.mul(&cyclotomic_cached(d, cache));
            }
        }
        num.div_exact(&den)
            .expect("cyclotomic division is always exact")
    };
    cache.insert(r, result.clone());
    result
}

/// Euler totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), IntPolynomial::from_i64(&[1, 1]));
        assert_eq!(cyclotomic_poly(3), IntPolynomial::from_i64(&[1, 1, 1]));
        assert_eq!(cyclotomic_poly(4), IntPolynomial::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(12), IntPolynomial::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn divides_x_r_minus_1_and_has_totient_degree() {
        for r in 1..=30u64 {
            let phi = cyclotomic_poly(r);
            assert_eq!(phi.degree().unwrap() as u64, euler_phi(r), "r={r}");
            let xr1 = IntPolynomial::x_pow(r as usize).add_constant(&(-num_bigint::BigInt::one()));
            assert!(xr1.div_exact(&phi).is_some(), "Phi_{r} must divide x^{r}-1");
        }
    }

    #[test]
    fn totient_values() {
        let expect = [1u64, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(euler_phi(i as u64 + 1), e);
        }
    }
}
