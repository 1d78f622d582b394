use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error};
use crate::formula::Formula;

/// Counting algorithms exposed by the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Adaptive stopping rule with short-circuit trials.
    Main,
    /// Lazy-sampling Karp–Luby–Madras.
    Lklm,
    /// Eager-sampling Karp–Luby–Madras.
    Klm,
    /// Brute-force enumeration.
    Exact,
}

impl Algorithm {
    pub const ESTIMATORS: [Algorithm; 3] = [Algorithm::Main, Algorithm::Lklm, Algorithm::Klm];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Main => "main",
            Algorithm::Lklm => "lklm",
            Algorithm::Klm => "klm",
            Algorithm::Exact => "exact",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "main" => Ok(Algorithm::Main),
            "lklm" | "l-klm" => Ok(Algorithm::Lklm),
            "klm" => Ok(Algorithm::Klm),
            "exact" => Ok(Algorithm::Exact),
            other => Err(invalid(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// The audited result of one estimator run.
///
/// For the main algorithm `successes == target` and `p_hat = target / trials`;
/// for the KLM variants `successes` counts inner steps and
/// `p_hat = successes / (trials · m)`. In both cases `mu_hat = rho_phi · p_hat`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub algo: Algorithm,
    pub mu_hat: f64,
    pub p_hat: f64,
    pub rho_phi: f64,
    /// Stopping threshold `T`.
    #[serde(rename = "T")]
    pub target: u64,
    /// Trials run, `N`.
    #[serde(rename = "N")]
    pub trials: u64,
    /// Success counter `Y`.
    #[serde(rename = "Y")]
    pub successes: u64,
    pub steps: u64,
    pub literals_sampled: u64,
    pub bits: u64,
    pub seed: u64,
    pub eps: f64,
    pub delta: f64,
    pub beta: Option<f64>,
    /// `min_v min(ρ(v), 1 − ρ(v))`.
    pub weight_margin: f64,
    /// Per-trial success flags, when recorded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub history: Option<Vec<bool>>,
}

/// Parameters shared by all estimators. `beta` is used by the main algorithm only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunParams {
    pub epsilon: f64,
    pub delta: f64,
    pub beta: f64,
    pub seed: u64,
}

impl RunParams {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Self {
        RunParams { epsilon, delta, beta: crate::engine::DEFAULT_BETA, seed }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        RunParams { seed, ..self }
    }
}

/// Runs one estimator. [`Algorithm::Exact`] is not an estimator and is rejected.
pub fn estimate(f: &Formula, algo: Algorithm, params: &RunParams) -> crate::Result<Estimate> {
    let RunParams { epsilon, delta, beta, seed } = *params;
    match algo {
        Algorithm::Main => {
            crate::engine::estimate_main(f, &crate::engine::MainConfig::new(epsilon, delta, seed).with_beta(beta))
        }
        Algorithm::Lklm => crate::baselines::estimate_lklm(f, epsilon, delta, seed),
        Algorithm::Klm => crate::baselines::estimate_klm(f, epsilon, delta, seed),
        Algorithm::Exact => Err(invalid("`exact` is an oracle, not an estimator")),
    }
}
