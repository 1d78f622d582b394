use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Harness;
use crate::engine::{blend_permutation, run_trial, width_heuristic, ClauseStore, EvalMode, LazyAssignment};
use crate::error::Result;
use crate::formula::{generate_benchmark, BenchmarkParams, Formula};
use crate::stats::SuiteFormula;
use crate::sampling::{derive_seed, InstrumentedRng};

/// Empirical trial success rate under one clause order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermutationRate {
    pub formula: String,
    pub perm: usize,
    pub n: usize,
    pub m: usize,
    pub trials: u64,
    pub successes: u64,
    pub rate: f64,
    pub p: f64,
    pub sigma: f64,
    /// `(rate − p) / σ`; zero when `σ = 0` and the rate is exact.
    pub z: f64,
}

impl PermutationRate {
    pub fn within(&self, sigmas: f64) -> bool {
        (self.rate - self.p).abs() <= sigmas * self.sigma
    }
}

/// Runs `trials` independent trials under each of `perms` clause orders and
/// compares the success rate with the exact `p`.
///
/// Order 0 is the width heuristic; the others are uniformly random.
pub fn permutation_rates(
    name: &str,
    f: &Formula,
    p: f64,
    perms: usize,
    trials: u64,
    seed: u64,
    harness: &Harness,
) -> Result<Vec<PermutationRate>> {
    let heuristic = width_heuristic(f);
    harness.install(|| {
        (0..perms)
            .into_par_iter()
            .map(|j| {
                let beta = if j == 0 { 0.0 } else { 1.0 };
                let pi = blend_permutation(f, beta, derive_seed(seed, 2 * j as u64), &heuristic)?;
                let store = ClauseStore::build(f, &pi)?;
                let mut rng = InstrumentedRng::new(derive_seed(seed, 2 * j as u64 + 1));
                let mut asg = LazyAssignment::new(store.num_vars());
                let successes = (0..trials)
                    .filter(|_| run_trial(&store, &mut asg, &mut rng, EvalMode::ShortCircuit).success)
                    .count() as u64;
                let rate = successes as f64 / trials as f64;
                let sigma = (p * (1.0 - p) / trials as f64).sqrt();
                let z = if sigma > 0.0 { (rate - p) / sigma } else if rate == p { 0.0 } else { f64::INFINITY };
                Ok(PermutationRate {
                    formula: name.to_string(),
                    perm: j,
                    n: f.num_vars(),
                    m: f.num_clauses(),
                    trials,
                    successes,
                    rate,
                    p,
                    sigma,
                    z,
                })
            })
            .collect()
    })?
}

/// Five small generated formulas (`n = m ∈ {6, 8, 10, 12, 14}`) with exact `p`.
pub fn lemma_suite(seed: u64) -> Result<Vec<SuiteFormula>> {
    [6usize, 8, 10, 12, 14]
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let f = generate_benchmark(&BenchmarkParams::accuracy(n, n), derive_seed(seed, i as u64))?;
            SuiteFormula::new(format!("n{n}_m{n}"), f)
        })
        .collect()
}
