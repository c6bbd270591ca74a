//! Vulnerable-parameter construction: cyclotomic values that are prime,
//! split-root lifts, the smallest-residue-of-order search, and the
//! decidable subset of the vulnerability checklist.

mod audit;
mod cyclotomic;
mod search;

pub use audit::{audit_conditions, ConditionStatus, VulnerabilityAudit};
pub use cyclotomic::{cyclotomic_poly, euler_phi};
pub use search::{
    find_vulnerable_params, is_prime, smallest_residue_of_order, verify_nrq_bound, BoundCheck,
    Construction, OrderSearchResult, SearchOptions, VulnerableInstance,
};
