//! Construction of vulnerable parameter sets: scan for a prime value of
//! `Phi_r`, pick split roots, and certify an irreducible lift.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modarith::{
    element_order, irreducibility_check, is_prime_bigint, is_prime_u64, IntPolynomial,
    IrreducibilityVerdict, PrimeModulus,
};
use crate::paramgen::cyclotomic::{cyclotomic_poly, euler_phi};

/// How the defining polynomial was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// `prod_{s in S}(x - s) + q*i`: splits completely mod `q`.
    SplitProduct,
    /// `(x - a)^n + q`: irreducible by the shifted Eisenstein pattern but
    /// not split mod `q`.
    ShiftedPower,
}

/// Output of the parameter search: `(f, q, a, r)` with `a` of exact order
/// `r` mod `q` and `f(a) = 0 mod q`.
#[derive(Debug, Clone)]
pub struct VulnerableInstance {
    pub f: IntPolynomial,
    pub q: PrimeModulus,
    pub a: u64,
    pub r: u64,
    /// Offset multiplier accepted in the lift step (0 for the shifted-power
    /// fallback, which skips that step).
    pub i_used: u64,
    /// The chosen residue set `S` (canonical representatives in `[0, q)`).
    pub split_roots: Vec<u64>,
    pub construction: Construction,
    /// 0 when the prime scan succeeded at the requested size; 1 or 2 when
    /// the acceptance window had to be widened by that many bits.
    pub relaxation_bits: u32,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Use `(x - a)^n + q` instead of the split product.
    pub fallback_power_form: bool,
    /// Budget for the lift offset `i`.
    pub i_budget: u64,
    /// Override the root set (signed minimal residues, must contain no
    /// duplicates mod q; `a` is always included).
    pub custom_roots: Option<Vec<i64>>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            fallback_power_form: false,
            i_budget: 10_000,
            custom_roots: None,
        }
    }
}

/// Size acceptance: `floor(log2 q) == q0` at relaxation 0, widening by one
/// bit per relaxation level when a window is exhausted.
fn bits_accepted(value_bits: u64, q0: u32, relax: u32) -> bool {
    let log2 = value_bits.saturating_sub(1); // floor(log2 v) for v >= 1
    log2.abs_diff(q0 as u64) <= relax as u64
}

/// Run the full search: scan `a` upward until `Phi_r(a)` is a prime of the
/// requested size, choose the root set, and lift to an irreducible `f`.
pub fn find_vulnerable_params(r: u64, n: usize, q0: u32, opts: &SearchOptions) -> Result<VulnerableInstance> {
    if r <= 2 {
        return Err(Error::Precondition("order r must exceed 2".into()));
    }
    if n < 1 {
        return Err(Error::Precondition("degree n must be at least 1".into()));
    }
    if (q0 as f64) <= (n as f64).log2() {
        return Err(Error::Precondition(format!(
            "q0 = {q0} must exceed log2(n) = {:.2}",
            (n as f64).log2()
        )));
    }
    let phi_r = cyclotomic_poly(r);
    let s = phi_r.degree().unwrap() as u32;
    let a_budget: u64 = 1u64
        .checked_shl(q0.div_ceil(s) + 8)
        .ok_or_else(|| Error::Capacity("q0 too large for the scan budget".into()))?;

    let mut found: Option<(u64, u64, u32)> = None;
    'relax: for relax in 0..=2u32 {
        if let Some((a, q)) = scan_for_prime(&phi_r, q0, relax, a_budget)? {
            found = Some((a, q, relax));
            break 'relax;
        }
    }
    let (a, qv, relaxation_bits) = found.ok_or_else(|| {
        Error::SearchExhausted(format!(
            "no prime value of Phi_{r} with size near 2^{q0} for a <= {a_budget}"
        ))
    })?;
    let q = PrimeModulus::new(qv)?;

    // a must have exact order r: q | Phi_r(a) gives a^r = 1; exactness can
    // only fail when q also divides some Phi_d(a), which forces q | r
    let r_actual = element_order(a % qv, &q)?;
    if r_actual != r {
        return Err(Error::SearchExhausted(format!(
            "accepted a = {a} has order {r_actual}, not {r} (degenerate prime {qv})"
        )));
    }

    if opts.fallback_power_form {
        let a_signed = BigInt::from(q.minimal_residue(a % qv));
        let f = IntPolynomial::from_roots(&vec![a_signed; n])
            .add_constant(&BigInt::from(qv));
        debug_assert_eq!(irreducibility_check(&f), IrreducibilityVerdict::Irreducible);
        return Ok(VulnerableInstance {
            f,
            q,
            a: a % qv,
            r,
            i_used: 0,
            split_roots: vec![a % qv],
            construction: Construction::ShiftedPower,
            relaxation_bits,
        });
    }

    // step 3: S = {a} plus the n-1 smallest minimal residues
    let signed_roots = match &opts.custom_roots {
        Some(custom) => {
            let mut v = custom.clone();
            let a_min = q.minimal_residue(a % qv);
            if !v.contains(&a_min) {
                v.push(a_min);
            }
            if v.len() != n {
                return Err(Error::Precondition(format!(
                    "custom root set must have exactly n = {n} elements including a"
                )));
            }
            v
        }
        None => smallest_minimal_residues(n, a % qv, &q)?,
    };

    let root_bigints: Vec<BigInt> = signed_roots.iter().map(|&v| BigInt::from(v)).collect();
    let base = IntPolynomial::from_roots(&root_bigints);

    // step 4: increment i until the lift certifies irreducible
    let qb = BigInt::from(qv);
    for i in 1..=opts.i_budget {
        let f = base.add_constant(&(&qb * BigInt::from(i)));
        if irreducibility_check(&f) == IrreducibilityVerdict::Irreducible {
            let mut split_roots: Vec<u64> = signed_roots.iter().map(|&v| q.reduce_i64(v)).collect();
            split_roots.sort_unstable();
            let inst = VulnerableInstance {
                f,
                q,
                a: a % qv,
                r,
                i_used: i,
                split_roots,
                construction: Construction::SplitProduct,
                relaxation_bits,
            };
            verify_instance(&inst)?;
            return Ok(inst);
        }
    }
    Err(Error::SearchExhausted(format!(
        "no certified-irreducible lift within i <= {}",
        opts.i_budget
    )))
}

/// Post-construction re-verification of every type invariant.
fn verify_instance(inst: &VulnerableInstance) -> Result<()> {
    let q = &inst.q;
    if inst.f.eval_mod(inst.a, q) != 0 {
        return Err(Error::Numeric("constructed f does not vanish at a".into()));
    }
    if element_order(inst.a, q)? != inst.r {
        return Err(Error::Numeric("constructed a has the wrong order".into()));
    }
    if inst.construction == Construction::SplitProduct {
        let n = inst.f.degree().unwrap();
        if inst.split_roots.len() != n {
            return Err(Error::Numeric("root set size mismatch".into()));
        }
        for w in inst.split_roots.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Numeric("duplicate split roots".into()));
            }
        }
        for &root in &inst.split_roots {
            if inst.f.eval_mod(root, q) != 0 {
                return Err(Error::Numeric(format!("{root} is not a root of f mod q")));
            }
        }
    }
    Ok(())
}

/// The `n - 1` nonzero residues of smallest absolute value (positive
/// before negative at each magnitude), skipping `a`, plus `a` itself.
fn smallest_minimal_residues(n: usize, a: u64, q: &PrimeModulus) -> Result<Vec<i64>> {
    let a_min = q.minimal_residue(a);
    let half = (q.get() - 1) / 2;
    let mut out = vec![a_min];
    let mut mag = 1u64;
    while out.len() < n {
        if mag > half {
            return Err(Error::Precondition(
                "q too small to pick n distinct residues".into(),
            ));
        }
        for cand in [mag as i64, -(mag as i64)] {
            if out.len() < n && cand != a_min {
                out.push(cand);
            }
        }
        mag += 1;
    }
    Ok(out)
}

/// Scan `a` upward for prime `Phi_r(a)` within the size window; parallel
/// over blocks with first-by-natural-order acceptance so the result is
/// identical to a sequential scan.
fn scan_for_prime(phi_r: &IntPolynomial, q0: u32, relax: u32, a_budget: u64) -> Result<Option<(u64, u64)>> {
    const BLOCK: u64 = 1 << 16;
    let coeffs: Vec<i128> = phi_r
        .coeffs()
        .iter()
        .map(|c| c.to_i128().expect("cyclotomic coefficients fit i128"))
        .collect();
    let upper_bits = (q0 + relax + 1) as u64;

    let n_blocks = a_budget.div_ceil(BLOCK);
    let result = (0..n_blocks)
        .into_par_iter()
        .by_exponential_blocks()
        .find_map_first(|blk| {
            let lo = blk * BLOCK + 1;
            let hi = ((blk + 1) * BLOCK).min(a_budget);
            let mut past_window = false;
            for a in lo..=hi {
                let value = eval_phi_i128(&coeffs, a);
                let bits = match &value {
                    Some(v) => 128 - v.leading_zeros() as u64,
                    None => {
                        // i128 overflow: the value is enormous, certainly past
                        // any u64-sized window
                        past_window = true;
                        break;
                    }
                };
                if bits > upper_bits && a >= 3 {
                    past_window = true;
                    break;
                }
                let v = value.unwrap();
                if v < 2 {
                    continue;
                }
                if bits_accepted(bits, q0, relax) {
                    if let Ok(v64) = u64::try_from(v) {
                        if v64 < (1 << 63) && is_prime_u64(v64) {
                            return Some(Ok((a, v64)));
                        }
                    } else {
                        // above u64: a prime here cannot be used as a modulus
                        return Some(Err(Error::Capacity(format!(
                            "Phi_r(a) = {v} exceeds the 63-bit modulus range; lower q0"
                        ))));
                    }
                }
            }
            if past_window {
                // emit a sentinel so later blocks are not searched; the scan
                // is ordered, so the first sentinel wins only if no real hit
                // precedes it
                return Some(Err(Error::SearchExhausted("scan passed the window".into())));
            }
            None
        });
    match result {
        Some(Ok(hit)) => Ok(Some(hit)),
        Some(Err(Error::SearchExhausted(_))) | None => Ok(None),
        Some(Err(e)) => Err(e),
    }
}

fn eval_phi_i128(coeffs: &[i128], a: u64) -> Option<i128> {
    let a = a as i128;
    let mut acc: i128 = 0;
    for c in coeffs.iter().rev() {
        acc = acc.checked_mul(a)?.checked_add(*c)?;
    }
    Some(acc)
}

/// Result of the smallest-residue-of-order search.
#[derive(Debug, Clone, Copy)]
pub struct OrderSearchResult {
    pub r: u64,
    pub q: PrimeModulus,
    /// Signed minimal residue of smallest absolute value with exact order
    /// `r`; positive wins ties.
    pub n_rq: i64,
    pub phi_r: u64,
    /// `(q / phi(r))^(1 / phi(r))`.
    pub lower_bound: f64,
    /// Whether `|Phi_r(n_rq)| = q` exactly.
    pub is_minimal: bool,
}

/// Scan residues in order of increasing absolute value (1, -1, 2, -2, ...)
/// for the first of exact order `r`.
pub fn smallest_residue_of_order(r: u64, q: &PrimeModulus) -> Result<OrderSearchResult> {
    if r <= 2 {
        return Err(Error::Precondition("order r must exceed 2".into()));
    }
    if (q.get() - 1) % r != 0 {
        return Err(Error::Domain(format!(
            "no element of order {r} exists mod {}: r does not divide q - 1",
            q.get()
        )));
    }
    let factors = crate::modarith::factor_u64(q.get() - 1)?;
    let order_of = |x: u64| -> u64 {
        let mut ord = q.get() - 1;
        for &(p, _) in &factors {
            while ord % p == 0 && q.pow(x, ord / p) == 1 {
                ord /= p;
            }
        }
        ord
    };
    let half = (q.get() - 1) / 2;
    let phi = euler_phi(r);
    for mag in 1..=half {
        for cand in [mag as i64, -(mag as i64)] {
            let residue = q.reduce_i64(cand);
            if order_of(residue) == r {
                let phi_poly = cyclotomic_poly(r);
                let value = phi_poly.eval(&BigInt::from(cand));
                let is_minimal = value.abs() == BigInt::from(q.get());
                return Ok(OrderSearchResult {
                    r,
                    q: *q,
                    n_rq: cand,
                    phi_r: phi,
                    lower_bound: (q.get() as f64 / phi as f64).powf(1.0 / phi as f64),
                    is_minimal,
                });
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "exhausted residues mod {} without finding order {r}",
        q.get()
    )))
}

/// Outcome of checking the lower bound `|n_rq| >= (q/phi(r))^(1/phi(r))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCheck {
    Holds,
    Violated,
    /// The hypothesis (at most two distinct prime factors, all odd) fails.
    Inapplicable,
}

pub fn verify_nrq_bound(result: &OrderSearchResult) -> BoundCheck {
    let mut r = result.r;
    let mut distinct = 0u32;
    if r % 2 == 0 {
        return BoundCheck::Inapplicable;
    }
    let mut p = 3u64;
    while p * p <= r {
        if r % p == 0 {
            distinct += 1;
            while r % p == 0 {
                r /= p;
            }
        }
        p += 2;
    }
    if r > 1 {
        distinct += 1;
    }
    if distinct > 2 {
        return BoundCheck::Inapplicable;
    }
    if (result.n_rq.unsigned_abs() as f64) >= result.lower_bound - 1e-9 {
        BoundCheck::Holds
    } else {
        BoundCheck::Violated
    }
}

/// True when the argument is prime; wraps the arbitrary-precision
/// Miller-Rabin used throughout the search.
pub fn is_prime(m: &BigInt) -> bool {
    is_prime_bigint(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn is_prime_examples() {
        assert!(is_prime(&BigInt::from(1125901148356951u64)));
        assert!(!is_prime(&BigInt::from(1u64 << 50)));
        assert!(is_prime(&BigInt::from(1_000_000_000_000_000_009u64)));
        // big: 2^89 - 1 is a Mersenne prime
        let m89 = (BigInt::from(1) << 89) - 1;
        assert!(is_prime(&m89));
        assert!(!is_prime(&(m89 + 2)));
    }

    #[test]
    fn scan_matches_hand_trace_for_tiny_q0() {
        // with the size window floor(log2 q) == q0 = 5, the scan skips
        // Phi_3(2)=7, Phi_3(3)=13, Phi_3(4)=21, Phi_3(5)=31 (all below 2^5)
        // and accepts Phi_3(6) = 43
        let inst = find_vulnerable_params(3, 4, 5, &SearchOptions::default()).unwrap();
        assert_eq!(inst.a, 6);
        assert_eq!(inst.q.get(), 43);
        assert_eq!(inst.relaxation_bits, 0);
        assert_eq!(element_order(inst.a, &inst.q).unwrap(), 3);
    }

    #[test]
    fn smallest_residue_examples() {
        let q7 = PrimeModulus::new(7).unwrap();
        let r = smallest_residue_of_order(3, &q7).unwrap();
        assert_eq!(r.n_rq, 2);
        assert!(r.is_minimal); // Phi_3(2) = 7

        let q31 = PrimeModulus::new(31).unwrap();
        let r = smallest_residue_of_order(3, &q31).unwrap();
        assert_eq!(r.n_rq, 5);
        assert!(r.is_minimal); // Phi_3(5) = 31

        let q5 = PrimeModulus::new(5).unwrap();
        let r = smallest_residue_of_order(4, &q5).unwrap();
        assert_eq!(r.n_rq, 2);

        assert!(smallest_residue_of_order(3, &q5).is_err()); // 3 does not divide 4
    }

    #[test]
    fn nrq_bound_examples() {
        let q7 = PrimeModulus::new(7).unwrap();
        let r = smallest_residue_of_order(3, &q7).unwrap();
        assert!((r.lower_bound - (3.5f64).sqrt()).abs() < 1e-12);
        assert_eq!(verify_nrq_bound(&r), BoundCheck::Holds);

        let q31 = PrimeModulus::new(31).unwrap();
        let r = smallest_residue_of_order(3, &q31).unwrap();
        assert_eq!(verify_nrq_bound(&r), BoundCheck::Holds);

        let q5 = PrimeModulus::new(5).unwrap();
        let r = smallest_residue_of_order(4, &q5).unwrap();
        assert_eq!(verify_nrq_bound(&r), BoundCheck::Inapplicable); // even r
    }

    #[test]
    fn fallback_power_form() {
        let opts = SearchOptions {
            fallback_power_form: true,
            ..Default::default()
        };
        let inst = find_vulnerable_params(3, 8, 5, &opts).unwrap();
        assert_eq!(inst.construction, Construction::ShiftedPower);
        assert_eq!(inst.i_used, 0);
        assert_eq!(inst.q.get(), 43);
        // f = (x - 6)^8 + 43
        assert_eq!(inst.f.degree(), Some(8));
        assert_eq!(inst.f.eval_mod(6, &inst.q), 0);
    }

    #[test]
    fn split_instance_small() {
        let inst = find_vulnerable_params(3, 8, 9, &SearchOptions::default()).unwrap();
        assert_eq!(inst.construction, Construction::SplitProduct);
        assert!(inst.i_used >= 1);
        assert_eq!(inst.split_roots.len(), 8);
        for &root in &inst.split_roots {
            assert_eq!(inst.f.eval_mod(root, &inst.q), 0);
        }
        // 1 is always among the chosen roots, so f(1) = 0 mod q
        assert_eq!(inst.f.eval_mod(1, &inst.q), 0);
    }
}
