//! Root finding in `F_q` by gcd with `x^q - x` and randomized
//! equal-degree splitting down to linear factors.

use rand::rngs::StdRng;
use rand::{Rng, RngCore, SeedableRng};

use crate::modarith::polymod as pm;
use crate::modarith::{IntPolynomial, PrimeModulus};

/// All distinct roots of `f` mod `q`, sorted ascending. Empty when `f` has
/// no roots mod `q`. The result does not depend on the supplied RNG; the
/// RNG only drives the internal splitting choices.
pub fn find_roots_mod_q_with(f: &IntPolynomial, q: &PrimeModulus, rng: &mut dyn RngCore) -> Vec<u64> {
    let mut fq = f.reduce_mod(q);
    pm::trim(&mut fq);
    let df = match pm::deg(&fq) {
        Some(d) if d >= 1 => d,
        _ => return vec![],
    };
    // normalize monic
    if fq[df] != 1 {
        let inv = q.inv(fq[df]).unwrap();
        for c in fq.iter_mut() {
            *c = q.mul(*c, inv);
        }
    }
    // product of the distinct linear factors: gcd(x^q - x, f)
    let mut xq = pm::pow_x_mod(q.get(), &fq, q);
    if xq.len() < 2 {
        xq.resize(2, 0);
    }
    xq[1] = q.sub(xq[1], 1);
    let linear_part = pm::gcd(&fq, &xq, q);
    let mut roots = Vec::new();
    split_linear(&linear_part, q, rng, &mut roots);
    roots.sort_unstable();
    roots
}

/// Deterministic-by-default version; the splitting RNG is seeded from the
/// inputs so repeated calls agree bit for bit.
pub fn find_roots_mod_q(f: &IntPolynomial, q: &PrimeModulus) -> Vec<u64> {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};
    let mut h = DefaultHasher::new();
    f.coeffs().hash(&mut h);
    q.get().hash(&mut h);
    let mut rng = StdRng::seed_from_u64(h.finish());
    find_roots_mod_q_with(f, q, &mut rng)
}

fn split_linear(g: &[u64], q: &PrimeModulus, rng: &mut dyn RngCore, out: &mut Vec<u64>) {
    match pm::deg(g) {
        None | Some(0) => {}
        Some(1) => {
            // monic x + c: root is -c
            out.push(q.neg(g[0]));
        }
        Some(_) => {
            // g is a squarefree product of >= 2 monic linear factors;
            // gcd(g, (x + delta)^((q-1)/2) - 1) splits it with prob ~1/2
            loop {
                let delta = rng.random_range(0..q.get());
                let shifted = [delta, 1u64];
                let mut h = pm::pow_mod(&shifted, (q.get() - 1) / 2, g, q);
                if h.is_empty() {
                    h = vec![0];
                }
                h[0] = q.sub(h[0], 1);
                let d = pm::gcd(g, &h, q);
                if let Some(dd) = pm::deg(&d) {
                    if dd > 0 && dd < pm::deg(g).unwrap() {
                        let rest = pm::div_exact(g, &d, q);
                        split_linear(&d, q, rng, out);
                        split_linear(&rest, q, rng, out);
                        return;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::prime::is_prime_u64;

    fn brute_roots(f: &IntPolynomial, q: &PrimeModulus) -> Vec<u64> {
        (0..q.get()).filter(|&a| f.eval_mod(a, q) == 0).collect()
    }

    #[test]
    fn stated_examples() {
        let q5 = PrimeModulus::new(5).unwrap();
        let f = IntPolynomial::from_i64(&[0, -1, 0, 1]); // x^3 - x
        assert_eq!(find_roots_mod_q(&f, &q5), vec![0, 1, 4]);

        let q7 = PrimeModulus::new(7).unwrap();
        let g = IntPolynomial::from_i64(&[1, 0, 1]); // x^2 + 1
        assert_eq!(find_roots_mod_q(&g, &q7), Vec::<u64>::new());

        let h = IntPolynomial::from_i64(&[1, 1, 1]); // x^2 + x + 1
        assert_eq!(find_roots_mod_q(&h, &q7), brute_roots(&h, &q7));
        assert_eq!(find_roots_mod_q(&h, &q7), vec![2, 4]);
    }

    #[test]
    fn agrees_with_brute_force_over_prime_sweep() {
        let polys = [
            IntPolynomial::from_i64(&[0, -1, 0, 1]),
            IntPolynomial::from_i64(&[1, 1, 1, 1, 1]),
            IntPolynomial::from_i64(&[3, -7, 2, 0, 1]),
            IntPolynomial::from_i64(&[-4, 0, 0, 0, 0, 1]),
            IntPolynomial::from_i64(&[11, 5, -3, 9, 1, 1]),
        ];
        for q in (3u64..500).filter(|&n| is_prime_u64(n)) {
            let q = PrimeModulus::new(q).unwrap();
            for f in &polys {
                assert_eq!(find_roots_mod_q(f, &q), brute_roots(f, &q), "q={}", q.get());
            }
        }
    }

    #[test]
    fn full_split_polynomial_recovers_every_root() {
        let q = PrimeModulus::new(40961).unwrap();
        let roots: Vec<i64> = vec![1, -1, 2, -2, 3, 17, -1000, 20000];
        let f = IntPolynomial::from_roots(&roots.iter().map(|&r| r.into()).collect::<Vec<_>>());
        let mut expect: Vec<u64> = roots.iter().map(|&r| q.reduce_i64(r)).collect();
        expect.sort_unstable();
        assert_eq!(find_roots_mod_q(&f, &q), expect);
    }

    #[test]
    fn independent_of_rng() {
        use rand::SeedableRng;
        let q = PrimeModulus::new(10007).unwrap();
        let f = IntPolynomial::from_roots(
            &(1..=40i64).map(|r| (r * r + 1).into()).collect::<Vec<_>>(),
        );
        let mut r1 = StdRng::seed_from_u64(1);
        let mut r2 = StdRng::seed_from_u64(999);
        assert_eq!(
            find_roots_mod_q_with(&f, &q, &mut r1),
            find_roots_mod_q_with(&f, &q, &mut r2)
        );
    }
}
