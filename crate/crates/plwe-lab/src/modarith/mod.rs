//! Exact arithmetic: prime fields up to 63 bits, integer polynomials,
//! arithmetic in `F_q[x]/(f)`, root finding mod `q`, multiplicative
//! orders, irreducibility certificates, and discriminants.

mod intpoly;
mod irreducibility;
mod order;
pub(crate) mod polymod;
pub(crate) mod prime;
mod ring;
mod roots;

pub use intpoly::{discriminant, resultant, IntPolynomial};
pub use irreducibility::{irreducibility_check, IrreducibilityVerdict, CERT_PRIMES};
pub use order::{element_order, factor_u64};
pub use prime::{is_prime_bigint, is_prime_u64, PrimeModulus};
pub use ring::{ResiduePolynomial, RingSpec};
pub use roots::{find_roots_mod_q, find_roots_mod_q_with};
