//! Prime moduli and exact arithmetic in `F_q` for `q < 2^63`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic Miller-Rabin for `n < 2^64`.
///
/// The fixed base set is sufficient for everything below 3.3e24, which
/// covers the whole `u64` range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Miller-Rabin for arbitrary-precision integers.
///
/// Below 3.3e24 the 13-prime base set is deterministic; above that, 64
/// extra pseudo-random bases (seeded from the input, so calls are
/// reproducible) push the error probability under `4^-64`.
pub fn is_prime_bigint(m: &num_bigint::BigInt) -> bool {
    use num_bigint::BigUint;
    use num_traits::{One, ToPrimitive, Zero};
    use rand::{Rng, SeedableRng};

    if m.sign() == num_bigint::Sign::Minus {
        return false;
    }
    let n = m.magnitude().clone();
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let deterministic_limit = BigUint::parse_bytes(b"3317044064679887385961981", 10).unwrap();
    let two = BigUint::from(2u8);
    if (&n % &two).is_zero() {
        return false;
    }
    let n_minus_1 = &n - 1u8;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;

    let mut bases: Vec<BigUint> = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41]
        .iter()
        .map(|&b| BigUint::from(b))
        .collect();
    if n > deterministic_limit {
        use std::collections::hash_map::DefaultHasher;
        use std::hash::{Hash, Hasher};
        let mut h = DefaultHasher::new();
        n.to_bytes_le().hash(&mut h);
        let mut rng = rand::rngs::StdRng::seed_from_u64(h.finish());
        let nbytes = (n.bits() as usize).div_ceil(8) + 8;
        for _ in 0..64 {
            let bytes: Vec<u8> = (0..nbytes).map(|_| rng.random::<u8>()).collect();
            let b = BigUint::from_bytes_le(&bytes) % (&n_minus_1 - 2u8) + 2u8;
            bases.push(b);
        }
    }
    'bases: for a in bases {
        if (&a % &n).is_zero() {
            continue;
        }
        let mut x = a.modpow(&d, &n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, &n);
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// An odd prime modulus `2 < q < 2^63`, validated at construction.
///
/// All residue arithmetic is exact; products go through 128-bit
/// intermediates so no overflow is possible in the supported range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeModulus {
    q: u64,
}

impl TryFrom<u64> for PrimeModulus {
    type Error = Error;
    fn try_from(q: u64) -> Result<Self> {
        PrimeModulus::new(q)
    }
}

impl From<PrimeModulus> for u64 {
    fn from(p: PrimeModulus) -> u64 {
        p.q
    }
}

impl std::fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.q)
    }
}

impl PrimeModulus {
    pub fn new(q: u64) -> Result<Self> {
        if q <= 2 || q >= 1 << 63 {
            return Err(Error::Domain(format!(
                "modulus {q} outside supported range (2, 2^63)"
            )));
        }
        if !is_prime_u64(q) {
            return Err(Error::Domain(format!("modulus {q} is not prime")));
        }
        Ok(PrimeModulus { q })
    }

    #[inline]
    pub fn get(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn add(&self, x: u64, y: u64) -> u64 {
        debug_assert!(x < self.q && y < self.q);
        let s = x + y;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, x: u64, y: u64) -> u64 {
        debug_assert!(x < self.q && y < self.q);
        if x >= y {
            x - y
        } else {
            x + self.q - y
        }
    }

    #[inline]
    pub fn neg(&self, x: u64) -> u64 {
        debug_assert!(x < self.q);
        if x == 0 {
            0
        } else {
            self.q - x
        }
    }

    #[inline]
    pub fn mul(&self, x: u64, y: u64) -> u64 {
        debug_assert!(x < self.q && y < self.q);
        mul_mod_u64(x, y, self.q)
    }

    pub fn pow(&self, x: u64, e: u64) -> u64 {
        pow_mod_u64(x, e, self.q)
    }

    /// Multiplicative inverse; zero is a domain error.
    pub fn inv(&self, x: u64) -> Result<u64> {
        if x == 0 {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(self.pow(x, self.q - 2))
    }

    /// Canonical residue of a signed integer.
    #[inline]
    pub fn reduce_i64(&self, x: i64) -> u64 {
        let r = x.rem_euclid(self.q as i64);
        r as u64
    }

    #[inline]
    pub fn reduce_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.q as i128) as u64
    }

    /// Minimal residue: the representative of smallest absolute value,
    /// in `[-q/2, q/2)`.
    #[inline]
    pub fn minimal_residue(&self, x: u64) -> i64 {
        debug_assert!(x < self.q);
        if x <= (self.q - 1) / 2 {
            x as i64
        } else {
            x as i64 - self.q as i64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    #[test]
    fn mod_op_examples() {
        let q = PrimeModulus::new(7).unwrap();
        assert_eq!(q.mul(3, 4), 5);
        assert_eq!(q.pow(2, 3), 1);
        assert_eq!(q.inv(3).unwrap(), 5);
        assert!(q.inv(0).is_err());
    }

    #[test]
    fn rejects_non_primes_and_tiny_moduli() {
        assert!(PrimeModulus::new(1).is_err());
        assert!(PrimeModulus::new(2).is_err());
        assert!(PrimeModulus::new(91).is_err());
        assert!(PrimeModulus::new(1 << 63).is_err());
        assert!(PrimeModulus::new((1 << 50) + 13).is_err()); // composite
        assert!(PrimeModulus::new(1125901148356951).is_ok());
    }

    #[test]
    fn minimal_residue_view() {
        let q = PrimeModulus::new(7).unwrap();
        let mins: Vec<i64> = (0..7).map(|x| q.minimal_residue(x)).collect();
        assert_eq!(mins, vec![0, 1, 2, 3, -3, -2, -1]);
    }

    #[test]
    fn is_prime_u64_cross_section() {
        let small: Vec<u64> = (0..100).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            small,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
        );
        assert!(is_prime_u64((1 << 61) - 1)); // Mersenne
        assert!(!is_prime_u64(u64::MAX));
    }

    proptest! {
        // mod_op agrees with arbitrary-precision reference arithmetic
        #[test]
        fn mod_ops_match_bigint(x in 0u64..u64::MAX / 2, y in 0u64..u64::MAX / 2, qi in 0usize..4) {
            let q = PrimeModulus::new([3, 40961, 1125901148356951, (1 << 62) + 135][qi]).unwrap();
            let (x, y) = (x % q.get(), y % q.get());
            let big = |v: u64| BigUint::from(v);
            let m = big(q.get());
            prop_assert_eq!(big(q.add(x, y)), (big(x) + big(y)) % &m);
            prop_assert_eq!(big(q.sub(x, y)), ((big(x) + &m) - big(y)) % &m);
            prop_assert_eq!(big(q.mul(x, y)), (big(x) * big(y)) % &m);
            prop_assert_eq!(big(q.pow(x, y % 1000)), big(x).modpow(&big(y % 1000), &m));
            if x != 0 {
                prop_assert_eq!(q.mul(x, q.inv(x).unwrap()), 1);
            }
        }
    }
}
