//! Sound one-sided irreducibility certification for monic integer
//! polynomials.
//!
//! Verdicts are conservative: `Irreducible` and `Composite` are only
//! returned with a certificate in hand (a factor-degree argument across
//! several primes, an Eisenstein witness, a recognized cyclotomic, or an
//! explicit integer root); everything else is `Unknown` and callers treat
//! it as a rejection.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::modarith::polymod::{self as pm, smallp};
use crate::modarith::IntPolynomial;

/// First 25 primes, the working set for modular certificates.
pub const CERT_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrreducibilityVerdict {
    Irreducible,
    Composite,
    Unknown,
}

/// Decide irreducibility over `Z` with cheap sufficient tests.
///
/// The positive certificate is a factor-degree sieve: the multiset of
/// irreducible factor degrees of `f mod p` constrains the possible degrees
/// of integer factors to subset sums; once the intersection over several
/// primes collapses to nothing proper, `f` is irreducible. A prime where
/// `f mod p` is itself irreducible collapses immediately, so the classic
/// one-prime test is subsumed.
pub fn irreducibility_check(f: &IntPolynomial) -> IrreducibilityVerdict {
    let n = match f.degree() {
        Some(0) | None => return IrreducibilityVerdict::Unknown,
        Some(n) => n,
    };
    assert!(f.is_monic(), "irreducibility check requires a monic input");
    if n == 1 {
        return IrreducibilityVerdict::Irreducible;
    }
    if f.coeff(0).is_zero() {
        return IrreducibilityVerdict::Composite; // x divides
    }
    if has_small_integer_root(f) {
        return IrreducibilityVerdict::Composite;
    }
    if eisenstein_witness(f) || shifted_power_plus_prime(f) {
        return IrreducibilityVerdict::Irreducible;
    }
    if is_cyclotomic(f) {
        return IrreducibilityVerdict::Irreducible;
    }

    // factor-degree sieve
    let nwords = n / 64 + 1;
    let mut possible: Option<Vec<u64>> = None;
    for &p in &CERT_PRIMES {
        let fp = f.reduce_mod_u64(p);
        if pm::deg(&fp) != Some(n) {
            continue; // p divides the leading coefficient (non-monic guard)
        }
        let degrees = match ddf_degrees(&fp, p) {
            Some(d) => d,
            None => continue, // not squarefree mod p
        };
        if degrees.len() == 1 {
            return IrreducibilityVerdict::Irreducible; // irreducible mod p
        }
        let sums = subset_sum_bits(&degrees, n, nwords);
        let joined = match &possible {
            None => sums,
            Some(prev) => prev.iter().zip(&sums).map(|(a, b)| a & b).collect(),
        };
        if only_trivial(&joined, n) {
            return IrreducibilityVerdict::Irreducible;
        }
        possible = Some(joined);
    }
    IrreducibilityVerdict::Unknown
}

fn has_small_integer_root(f: &IntPolynomial) -> bool {
    // candidate roots must divide the constant term; testing a small window
    // is cheap and catches the factors that actually occur in practice
    (-64i64..=64).any(|c| c != 0 && f.eval(&BigInt::from(c)).is_zero())
}

/// Classic Eisenstein criterion at the certification primes.
fn eisenstein_witness(f: &IntPolynomial) -> bool {
    let n = f.degree().unwrap();
    'primes: for &p in &CERT_PRIMES {
        let pb = BigInt::from(p);
        if (f.leading_coefficient() % &pb).is_zero() {
            continue;
        }
        for i in 0..n {
            if !(f.coeff(i) % &pb).is_zero() {
                continue 'primes;
            }
        }
        if !(f.coeff(0) % (&pb * &pb)).is_zero() {
            return true;
        }
    }
    false
}

/// The pattern `(x - a)^n + c` with `|c|` prime is Eisenstein after the
/// shift `y = x - a`.
fn shifted_power_plus_prime(f: &IntPolynomial) -> bool {
    let n = f.degree().unwrap();
    let s = f.coeff(n - 1);
    let nn = BigInt::from(n as u64);
    let (a, rem) = num_integer::Integer::div_rem(&-s, &nn);
    if !rem.is_zero() {
        return false;
    }
    let shifted = f.shift(&a); // f(x + a); equals x^n + c when f = (x - a)^n + c
    let c = shifted.coeff(0);
    if c.is_zero() {
        return false;
    }
    for i in 1..n {
        if !shifted.coeff(i).is_zero() {
            return false;
        }
    }
    crate::modarith::prime::is_prime_bigint(&c.abs())
}

/// Recognize `f == Phi_m` for some `m` (cyclotomics are irreducible but
/// evade per-prime and sieve certificates, e.g. `x^16 + 1`).
fn is_cyclotomic(f: &IntPolynomial) -> bool {
    let n = f.degree().unwrap();
    if f.max_coeff_bits() > 40 || n > 1 << 14 {
        return false;
    }
    // phi(m) = n forces m <= 2 n^2 comfortably; sieve totients up to there
    let limit = (2 * n * n).max(8).min(1 << 22);
    let mut phi: Vec<u32> = (0..=limit as u32).collect();
    for i in 2..=limit {
        if phi[i] == i as u32 {
            let mut j = i;
            while j <= limit {
                phi[j] -= phi[j] / i as u32;
                j += i;
            }
        }
    }
    for m in 1..=limit {
        if phi[m] as usize == n && crate::paramgen::cyclotomic_poly(m as u64) == *f {
            return true;
        }
    }
    false
}

/// Multiset of irreducible factor degrees of squarefree `fp` mod `p`;
/// `None` when `fp` is not squarefree.
pub fn ddf_degrees(fp: &[u64], p: u64) -> Option<Vec<usize>> {
    let n = pm::deg(fp)?;
    if n == 0 {
        return Some(vec![]);
    }
    let d = smallp::gcd(fp, &smallp::derivative(fp, p), p);
    if pm::deg(&d) != Some(0) {
        return None;
    }
    // monic-ize
    let mut rem: Vec<u64> = fp.iter().map(|&c| c % p).collect();
    pm::trim(&mut rem);
    if rem[n] != 1 {
        let inv = {
            let mut acc = 1u64;
            let mut b = rem[n];
            let mut e = p - 2;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * b % p;
                }
                b = b * b % p;
                e >>= 1;
            }
            acc
        };
        for c in rem.iter_mut() {
            *c = *c * inv % p;
        }
    }

    let mut degrees = Vec::new();
    let mut w = vec![0u64; pm::deg(&rem).unwrap().max(2)];
    w[1] = 1; // x
    let mut k = 0usize;
    loop {
        let dr = match pm::deg(&rem) {
            Some(0) | None => break,
            Some(d) => d,
        };
        if 2 * (k + 1) > dr {
            degrees.push(dr);
            break;
        }
        k += 1;
        w = smallp::pow_mod(&w, p, &rem, p);
        let mut diff = w.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        let g = smallp::gcd(&rem, &diff, p);
        if let Some(dg) = pm::deg(&g) {
            if dg > 0 {
                debug_assert_eq!(dg % k, 0);
                for _ in 0..dg / k {
                    degrees.push(k);
                }
                rem = smallp::div_exact(&rem, &g, p);
                w = smallp::rem_general(&w, &rem, p);
                if w.len() < rem.len().saturating_sub(1).max(1) {
                    w.resize(rem.len().saturating_sub(1).max(1), 0);
                }
            }
        }
    }
    debug_assert_eq!(degrees.iter().sum::<usize>(), n);
    Some(degrees)
}

fn subset_sum_bits(degrees: &[usize], n: usize, nwords: usize) -> Vec<u64> {
    let mut bits = vec![0u64; nwords];
    bits[0] = 1;
    for &d in degrees {
        let shifted = shl_or(&bits, d, n, nwords);
        for (b, s) in bits.iter_mut().zip(&shifted) {
            *b |= s;
        }
    }
    bits
}

fn shl_or(bits: &[u64], by: usize, n: usize, nwords: usize) -> Vec<u64> {
    let mut out = vec![0u64; nwords];
    let (wshift, bshift) = (by / 64, by % 64);
    for i in (0..nwords).rev() {
        if i >= wshift {
            let mut v = bits[i - wshift] << bshift;
            if bshift > 0 && i > wshift {
                v |= bits[i - wshift - 1] >> (64 - bshift);
            }
            out[i] = v;
        }
    }
    // mask beyond n
    let top = n % 64;
    if top != 63 {
        let last = n / 64;
        out[last] &= (1u64 << (top + 1)) - 1;
        for w in out.iter_mut().skip(last + 1) {
            *w = 0;
        }
    }
    out
}

fn only_trivial(bits: &[u64], n: usize) -> bool {
    for i in 1..n {
        if bits[i / 64] >> (i % 64) & 1 == 1 {
            return false;
        }
    }
    true
}
