//! Dense polynomial arithmetic over `F_q`, constant term first.
//!
//! Two flavors: a general path for `q < 2^63` using 128-bit intermediates,
//! and a delayed-reduction path for small primes used by the factoring
//! machinery (where coefficient products fit comfortably in 64 bits).

use crate::modarith::prime::{mul_mod_u64, PrimeModulus};

pub fn trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

pub fn deg(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

pub fn is_zero(v: &[u64]) -> bool {
    deg(v).is_none()
}

pub fn mul(a: &[u64], b: &[u64], q: &PrimeModulus) -> Vec<u64> {
    if is_zero(a) || is_zero(b) {
        return vec![0];
    }
    let m = q.get();
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = (out[i + j] + mul_mod_u64(x, y, m)) % m;
            }
        }
    }
    let mut out = out;
    trim(&mut out);
    out
}

/// Remainder of `a` modulo monic `f`.
pub fn rem_monic(a: &[u64], f: &[u64], q: &PrimeModulus) -> Vec<u64> {
    let df = deg(f).expect("modulus polynomial must be nonzero");
    debug_assert_eq!(f[df], 1, "modulus polynomial must be monic");
    let mut w: Vec<u64> = a.to_vec();
    if w.len() <= df {
        w.resize(df.max(1), 0);
        return w;
    }
    let m = q.get();
    for d in (df..w.len()).rev() {
        let c = w[d];
        if c == 0 {
            continue;
        }
        w[d] = 0;
        let neg = m - c;
        for j in 0..df {
            w[d - df + j] = (w[d - df + j] + mul_mod_u64(neg, f[j], m)) % m;
        }
    }
    w.truncate(df.max(1));
    w
}

pub fn mul_mod(a: &[u64], b: &[u64], f: &[u64], q: &PrimeModulus) -> Vec<u64> {
    rem_monic(&mul(a, b, q), f, q)
}

/// `x^e mod f` by square-and-multiply.
pub fn pow_x_mod(e: u64, f: &[u64], q: &PrimeModulus) -> Vec<u64> {
    let df = deg(f).unwrap();
    let mut result = vec![0u64; df.max(1)];
    result[0] = 1;
    if df == 1 {
        // f = x - r: x ≡ r
        let r = q.neg(f[0]);
        result[0] = q.pow(r, e);
        return result;
    }
    let mut base = vec![0u64; df];
    base[1] = 1;
    let mut exp = e;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(&result, &base, f, q);
        }
        exp >>= 1;
        if exp > 0 {
            base = mul_mod(&base, &base, f, q);
        }
    }
    result
}

/// `g^e mod f`.
pub fn pow_mod(g: &[u64], e: u64, f: &[u64], q: &PrimeModulus) -> Vec<u64> {
    let df = deg(f).unwrap();
    let mut result = vec![0u64; df.max(1)];
    result[0] = 1;
    let mut base = rem_monic(g, f, q);
    let mut exp = e;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(&result, &base, f, q);
        }
        exp >>= 1;
        if exp > 0 {
            base = mul_mod(&base, &base, f, q);
        }
    }
    result
}

/// Monic gcd.
pub fn gcd(a: &[u64], b: &[u64], q: &PrimeModulus) -> Vec<u64> {
    let mut u = a.to_vec();
    let mut v = b.to_vec();
    trim(&mut u);
    trim(&mut v);
    while !is_zero(&v) {
        let r = rem_general(&u, &v, q);
        u = v;
        v = r;
    }
    // normalize monic
    if let Some(d) = deg(&u) {
        if u[d] != 1 {
            let inv = q.inv(u[d]).unwrap();
            for c in u.iter_mut() {
                *c = q.mul(*c, inv);
            }
        }
    }
    trim(&mut u);
    u
}

/// Remainder for a not-necessarily-monic divisor.
pub fn rem_general(a: &[u64], f: &[u64], q: &PrimeModulus) -> Vec<u64> {
    let df = match deg(f) {
        Some(d) => d,
        None => panic!("division by zero polynomial"),
    };
    let mut w = a.to_vec();
    trim(&mut w);
    let da = match deg(&w) {
        Some(d) => d,
        None => return vec![0],
    };
    if da < df {
        return w;
    }
    let m = q.get();
    let inv = q.inv(f[df]).unwrap();
    for d in (df..=da).rev() {
        let c = q.mul(w[d], inv);
        if c == 0 {
            continue;
        }
        w[d] = 0;
        let neg = m - c;
        for j in 0..df {
            if f[j] != 0 {
                w[d - df + j] = (w[d - df + j] + mul_mod_u64(neg, f[j], m)) % m;
            }
        }
    }
    w.truncate(df.max(1));
    trim(&mut w);
    w
}

/// Exact quotient `a / f` (remainder must vanish).
pub fn div_exact(a: &[u64], f: &[u64], q: &PrimeModulus) -> Vec<u64> {
    let df = deg(f).expect("division by zero polynomial");
    let mut w = a.to_vec();
    trim(&mut w);
    let da = match deg(&w) {
        Some(d) => d,
        None => return vec![0],
    };
    assert!(da >= df);
    let m = q.get();
    let inv = q.inv(f[df]).unwrap();
    let mut quo = vec![0u64; da - df + 1];
    for d in (df..=da).rev() {
        let c = q.mul(w[d], inv);
        quo[d - df] = c;
        if c == 0 {
            continue;
        }
        let neg = m - c;
        for j in 0..=df {
            if f[j] != 0 {
                w[d - df + j] = (w[d - df + j] + mul_mod_u64(neg, f[j], m)) % m;
            }
        }
    }
    debug_assert!(is_zero(&w), "division was not exact");
    quo
}

pub fn eval(p: &[u64], x: u64, q: &PrimeModulus) -> u64 {
    let mut acc = 0u64;
    for &c in p.iter().rev() {
        acc = q.add(q.mul(acc, x), c);
    }
    acc
}

// --- small-prime flavor (p^2 * len must fit u64; used with p <= ~2^20) ---

pub mod smallp {
    /// Multiply mod small prime with delayed reduction.
    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        debug_assert!(p
            .checked_mul(p)
            .and_then(|s| s.checked_mul((a.len() + b.len()) as u64))
            .is_some());
        if super::is_zero(a) || super::is_zero(b) {
            return vec![0];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        for c in out.iter_mut() {
            *c %= p;
        }
        let mut out = out;
        super::trim(&mut out);
        out
    }

    /// Remainder modulo monic `f`, delayed reduction.
    pub fn rem_monic(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let df = super::deg(f).expect("modulus polynomial must be nonzero");
        debug_assert_eq!(f[df], 1);
        let mut w: Vec<u64> = a.iter().map(|&c| c % p).collect();
        if w.len() <= df {
            w.resize(df.max(1), 0);
            return w;
        }
        // each pivot adds (p - c) * f[j] < p^2 to positions below; interleave
        // a cheap renormalization to keep sums far from overflow
        let renorm_every = (u64::MAX / (p * p + 1)).max(1) as usize;
        let mut since = 0usize;
        for d in (df..w.len()).rev() {
            let c = w[d] % p;
            w[d] = 0;
            if c != 0 {
                let neg = p - c;
                for j in 0..df {
                    w[d - df + j] += neg * f[j];
                }
            }
            since += 1;
            if since >= renorm_every {
                for v in w[..d].iter_mut() {
                    *v %= p;
                }
                since = 0;
            }
        }
        w.truncate(df.max(1));
        for c in w.iter_mut() {
            *c %= p;
        }
        w
    }

    pub fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        rem_monic(&mul(a, b, p), f, p)
    }

    fn pow_u64(mut base: u64, mut exp: u64, p: u64) -> u64 {
        let mut acc = 1u64 % p;
        base %= p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        acc
    }

    #[inline]
    fn inv_u64(x: u64, p: u64) -> u64 {
        pow_u64(x, p - 2, p)
    }

    /// `g^e mod f` for prime `p`.
    pub fn pow_mod(g: &[u64], e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let df = super::deg(f).unwrap();
        let mut result = vec![0u64; df.max(1)];
        result[0] = 1;
        let mut base = rem_monic(g, f, p);
        let mut exp = e;
        while exp > 0 {
            if exp & 1 == 1 {
                result = mul_mod(&result, &base, f, p);
            }
            exp >>= 1;
            if exp > 0 {
                base = mul_mod(&base, &base, f, p);
            }
        }
        result
    }

    pub fn rem_general(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let df = super::deg(f).expect("division by zero polynomial");
        let mut w: Vec<u64> = a.iter().map(|&c| c % p).collect();
        super::trim(&mut w);
        let da = match super::deg(&w) {
            Some(d) => d,
            None => return vec![0],
        };
        if da < df {
            return w;
        }
        let inv = inv_u64(f[df], p);
        for d in (df..=da).rev() {
            let c = w[d] * inv % p;
            if c == 0 {
                continue;
            }
            w[d] = 0;
            let neg = p - c;
            for j in 0..df {
                if f[j] != 0 {
                    w[d - df + j] = (w[d - df + j] + neg * f[j]) % p;
                }
            }
        }
        w.truncate(df.max(1));
        super::trim(&mut w);
        w
    }

    /// Monic gcd mod prime `p`.
    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut u: Vec<u64> = a.iter().map(|&c| c % p).collect();
        let mut v: Vec<u64> = b.iter().map(|&c| c % p).collect();
        super::trim(&mut u);
        super::trim(&mut v);
        while !super::is_zero(&v) {
            let r = rem_general(&u, &v, p);
            u = v;
            v = r;
        }
        if let Some(d) = super::deg(&u) {
            if u[d] != 1 {
                let inv = inv_u64(u[d], p);
                for c in u.iter_mut() {
                    *c = *c * inv % p;
                }
            }
        }
        super::trim(&mut u);
        u
    }

    pub fn div_exact(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let df = super::deg(f).expect("division by zero polynomial");
        let mut w: Vec<u64> = a.iter().map(|&c| c % p).collect();
        super::trim(&mut w);
        let da = match super::deg(&w) {
            Some(d) => d,
            None => return vec![0],
        };
        assert!(da >= df);
        let inv = inv_u64(f[df], p);
        let mut quo = vec![0u64; da - df + 1];
        for d in (df..=da).rev() {
            let c = w[d] * inv % p;
            quo[d - df] = c;
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for j in 0..=df {
                if f[j] != 0 {
                    w[d - df + j] = (w[d - df + j] + neg * f[j]) % p;
                }
            }
        }
        debug_assert!(super::is_zero(&w), "division was not exact");
        super::trim(&mut quo);
        quo
    }

    pub fn derivative(a: &[u64], p: u64) -> Vec<u64> {
        if a.len() <= 1 {
            return vec![0];
        }
        let mut out: Vec<u64> = a[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| c * ((i as u64 + 1) % p) % p)
            .collect();
        super::trim(&mut out);
        out
    }
}
