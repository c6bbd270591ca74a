//! The distinguishing attacks: guess elimination at a root, the
//! small-order value-set variant, the interval-counting distinguisher
//! with its closed-form advantage and success probabilities, and the
//! smearing checker.

mod elimination;
mod residue;
mod smearing;

pub use elimination::{
    attack_alpha_one, attack_small_order, build_value_set, hard_threshold, EliminationResult,
    ValueSet, Verdict,
};
pub use residue::{
    empirical_advantage, residue_advantage, residue_advantage_with_max_order,
    residue_distinguisher, success_probability, threshold_n, AdvantageCase, CdfMethod,
    DistinguisherMode, DistinguisherRun, DistinguisherVerdict, ResidueAttackPlan,
    SuccessProbability, DEFAULT_SMALL_ORDER_MAX, DISTINGUISHER_GUESS_LIMIT,
};
pub use smearing::{check_smearing, ImageSource, SmearingReport, DEFAULT_SMEARING_BUDGET};
