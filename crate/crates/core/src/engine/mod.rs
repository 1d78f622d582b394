//! The adaptive-stopping estimator.
//!
//! A run fixes one clause order `π`, lays the clauses out for it, and then
//! repeats short-circuit trials until `T` of them succeed. Each trial succeeds
//! with probability `p = E[1/L]` regardless of `π`, so the trial count `N` is
//! negative-binomial and `p̂ = T/N` concentrates around `p` with the two-sided
//! tail bound that defines `T`. The model ratio estimate is `μ̂ = ρ(Φ)·p̂`.

mod permutation;
mod store;
mod threshold;
mod trial;

pub use permutation::{
    blend_permutation, random_pick_probability, width_heuristic, BlendedPermutation,
};
pub use store::{ClauseStore, LazyAssignment};
pub use threshold::{
    chernoff_lower, chernoff_lower_ln, compute_t_main, log_failure_bound, lower_tail_log_base,
    threshold_bracket, upper_tail_log_base,
};
pub use trial::{run_trial, EvalMode, TrialOutcome, TrialStats};

pub(crate) use store::{lit_positive, lit_var};
pub(crate) use threshold::check_eps_delta;

use crate::error::{Error, Result};
use crate::estimate::{Algorithm, Estimate};
use crate::formula::Formula;
use crate::sampling::{derive_seed, InstrumentedRng};

/// Default blending rate for the clause order.
pub const DEFAULT_BETA: f64 = 0.01;

pub(crate) const PERMUTATION_STREAM: u64 = 1;
pub(crate) const TRIAL_STREAM: u64 = 2;

/// Parameters of one run of the main estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub beta: f64,
    pub seed: u64,
    /// Keep the per-trial success flags in the estimate.
    pub record_history: bool,
    /// Scan both assignment arrays after every trial and panic if any bit is set.
    pub check_hygiene: bool,
}

impl MainConfig {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Self {
        MainConfig {
            epsilon,
            delta,
            beta: DEFAULT_BETA,
            seed,
            record_history: false,
            check_hygiene: false,
        }
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }
}

/// Rejects weights at 0 or 1: a zero-weight clause cannot be sampled.
pub(crate) fn check_interior_weights(f: &Formula) -> Result<()> {
    match f.weights().as_slice().iter().position(|&r| r <= 0.0 || r >= 1.0) {
        Some(v) => Err(Error::InvalidFormula(format!(
            "variable x{} has weight {}; estimators need weights strictly inside (0, 1)",
            v + 1,
            f.weights().var(v as u32)
        ))),
        None => Ok(()),
    }
}

/// Runs the main estimator: blended clause order, store layout, then trials.
pub fn estimate_main(f: &Formula, cfg: &MainConfig) -> Result<Estimate> {
    check_eps_delta(cfg.epsilon, cfg.delta)?;
    check_interior_weights(f)?;
    let mut perm_rng = InstrumentedRng::new(derive_seed(cfg.seed, PERMUTATION_STREAM));
    let pi = permutation::blend_with_rng(f, cfg.beta, &mut perm_rng, &width_heuristic(f))?;
    let store = ClauseStore::build(f, &pi)?;
    let mut est = estimate_with_store(&store, cfg)?;
    est.bits += pi.bits();
    Ok(est)
}

/// Runs trials on a prebuilt store (fixed `π`) until `T` successes.
///
/// The store is read-only, so concurrent runs may share it.
pub fn estimate_with_store(store: &ClauseStore, cfg: &MainConfig) -> Result<Estimate> {
    let target = compute_t_main(cfg.epsilon, cfg.delta)?;
    let mut rng = InstrumentedRng::new(derive_seed(cfg.seed, TRIAL_STREAM));
    let mut asg = LazyAssignment::new(store.num_vars());
    let mut history = cfg.record_history.then(Vec::new);

    let (mut successes, mut trials) = (0u64, 0u64);
    let (mut steps, mut sampled) = (0u64, 0u64);
    while successes < target {
        let out = run_trial(store, &mut asg, &mut rng, EvalMode::ShortCircuit);
        if cfg.check_hygiene {
            assert!(asg.is_clear(), "assignment arrays not clear after trial {trials}");
        }
        trials += 1;
        successes += out.success as u64;
        steps += out.stats.steps;
        sampled += out.stats.literals_sampled;
        if let Some(h) = history.as_mut() {
            h.push(out.success);
        }
    }

    let p_hat = target as f64 / trials as f64;
    let rho_phi = store.rho_phi();
    Ok(Estimate {
        algo: Algorithm::Main,
        mu_hat: rho_phi * p_hat,
        p_hat,
        rho_phi,
        target,
        trials,
        successes,
        steps,
        literals_sampled: sampled,
        bits: rng.bits_consumed(),
        seed: cfg.seed,
        eps: cfg.epsilon,
        delta: cfg.delta,
        beta: Some(cfg.beta),
        weight_margin: (0..store.num_vars() as u32)
            .map(|v| store.rho(v).min(1.0 - store.rho(v)))
            .fold(0.5, f64::min),
        history,
    })
}
