//! Multiplicative order mod `q` via factorization of `q - 1`.

use crate::error::{Error, Result};
use crate::modarith::prime::{is_prime_u64, mul_mod_u64, pow_mod_u64, PrimeModulus};

const TRIAL_BOUND: u64 = 1_000_000;
const RHO_BUDGET: u64 = 1 << 22;

/// Factor a `u64` by trial division up to 10^6 plus Pollard rho with a
/// bounded iteration budget. Returns (prime, multiplicity) pairs.
/// Cryptographic-size cofactors can exhaust the budget, which is reported
/// rather than looped on.
pub fn factor_u64(mut n: u64) -> Result<Vec<(u64, u32)>> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut push = |p: u64, out: &mut Vec<(u64, u32)>| {
        if let Some(last) = out.last_mut() {
            if last.0 == p {
                last.1 += 1;
                return;
            }
        }
        out.push((p, 1));
    };
    for p in std::iter::once(2).chain((3..TRIAL_BOUND).step_by(2)) {
        if p * p > n {
            break;
        }
        while n % p == 0 {
            push(p, &mut out);
            n /= p;
        }
    }
    if n > 1 {
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime_u64(m) {
                push(m, &mut out);
                continue;
            }
            let d = pollard_rho(m).ok_or_else(|| {
                Error::SearchExhausted(format!(
                    "factorization of {m} exceeded the rho iteration budget"
                ))
            })?;
            stack.push(d);
            stack.push(m / d);
        }
    }
    out.sort_unstable();
    // merge duplicates produced by independent stack paths
    let mut merged: Vec<(u64, u32)> = Vec::new();
    for (p, e) in out {
        if let Some(last) = merged.last_mut() {
            if last.0 == p {
                last.1 += e;
                continue;
            }
        }
        merged.push((p, e));
    }
    Ok(merged)
}

/// Brent-style Pollard rho; `None` when the budget runs out.
fn pollard_rho(n: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mut c = 1u64;
    loop {
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut count = 0u64;
        let f = |v: u64| (mul_mod_u64(v, v, n) + c) % n;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
            count += 1;
            if count > RHO_BUDGET {
                return None;
            }
        }
        if d != n {
            return Some(d);
        }
        c += 1;
        if c > 20 {
            return None;
        }
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact multiplicative order of `alpha` mod `q` (divides `q - 1`).
pub fn element_order(alpha: u64, q: &PrimeModulus) -> Result<u64> {
    if alpha == 0 || alpha >= q.get() {
        return Err(Error::Domain(format!(
            "order undefined for residue {alpha} mod {}",
            q.get()
        )));
    }
    if alpha == 1 {
        return Ok(1);
    }
    let group = q.get() - 1;
    let factors = factor_u64(group)?;
    let mut ord = group;
    for (p, _) in factors {
        while ord % p == 0 && pow_mod_u64(alpha, ord / p, q.get()) == 1 {
            ord /= p;
        }
    }
    debug_assert_eq!(pow_mod_u64(alpha, ord, q.get()), 1);
    Ok(ord)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(alpha: u64, q: u64) -> u64 {
        let mut x = alpha;
        let mut k = 1;
        while x != 1 {
            x = mul_mod_u64(x, alpha, q);
            k += 1;
        }
        k
    }

    #[test]
    fn stated_examples() {
        let q7 = PrimeModulus::new(7).unwrap();
        assert_eq!(element_order(2, &q7).unwrap(), 3);
        assert_eq!(element_order(1, &q7).unwrap(), 1);
        assert_eq!(element_order(6, &q7).unwrap(), 2);
        assert!(element_order(0, &q7).is_err());
    }

    #[test]
    fn matches_brute_force() {
        for qv in [101u64, 257, 10007] {
            let q = PrimeModulus::new(qv).unwrap();
            let step = (qv / 97).max(1);
            for alpha in (1..qv).step_by(step as usize) {
                assert_eq!(
                    element_order(alpha, &q).unwrap(),
                    brute_order(alpha, qv),
                    "alpha={alpha} q={qv}"
                );
            }
        }
    }

    #[test]
    fn factors_fifty_bit_group() {
        // q - 1 for the largest parameter-search prime used in tests
        let q = 1125901148356951u64;
        let f = factor_u64(q - 1).unwrap();
        let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
        assert_eq!(back, q - 1);
        for &(p, _) in &f {
            assert!(is_prime_u64(p));
        }
    }
}
