//! Reference estimators and exact oracles used for comparison and verification.

mod exact;
mod klm;

pub use exact::{coverage_expectation, exact_count, ExactResult, DEFAULT_MAX_VARS};
pub use klm::{compute_t_lklm, estimate_klm, estimate_lklm, lklm_threshold_real};
