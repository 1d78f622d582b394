use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{mean, run_seed, timed_estimate, Harness, RunRow};
use crate::error::{invalid, Error, Result};
use crate::estimate::{Algorithm, RunParams};
use crate::formula::{generate_benchmark, BenchmarkParams, Formula};
use crate::sampling::derive_seed;

/// Generator parameters as a function of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recipe {
    /// `m = n`, `α = 2`, `γ = ⌊log₂m/10⌋`, `λ = ⌊2 log₂m⌋`.
    Scaling,
    /// `m = n`, `α = 8`, `γ = ⌊log₂m/4⌋`, `λ = ⌊2 log₂m⌋`.
    Randomness,
}

impl Recipe {
    pub fn params(self, n: usize) -> BenchmarkParams {
        match self {
            Recipe::Scaling => BenchmarkParams::scaling(n),
            Recipe::Randomness => BenchmarkParams::randomness(n),
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Recipe::Scaling => "scaling",
            Recipe::Randomness => "randomness",
        })
    }
}

impl FromStr for Recipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scaling" => Ok(Recipe::Scaling),
            "randomness" => Ok(Recipe::Randomness),
            other => Err(invalid(format!("unknown recipe `{other}`"))),
        }
    }
}

/// Mean work of one algorithm at one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub algo: Algorithm,
    pub n: usize,
    pub m: usize,
    pub runs: u64,
    pub mean_steps: f64,
    pub mean_bits: f64,
    pub mean_literals: f64,
    #[serde(rename = "mean_N")]
    pub mean_trials: f64,
    pub mean_wall_ms: f64,
}

/// Generates one benchmark per size (seeded from `params.seed` and `n`), then
/// runs every algorithm `runs` times on it.
///
/// Returns one summary row per (size, algorithm) and the per-run rows, both
/// ordered by size, then algorithm, then run.
pub fn scaling_sweep(
    sizes: &[usize],
    recipe: Recipe,
    algos: &[Algorithm],
    params: &RunParams,
    runs: u32,
    harness: &Harness,
) -> Result<(Vec<SweepRow>, Vec<RunRow>)> {
    if runs == 0 {
        return Err(invalid("runs must be at least 1"));
    }
    let formulas: Vec<Formula> = harness.install(|| {
        sizes
            .par_iter()
            .map(|&n| generate_benchmark(&recipe.params(n), derive_seed(params.seed, n as u64)))
            .collect::<Result<_>>()
    })??;

    let jobs: Vec<(usize, Algorithm, u32)> = (0..sizes.len())
        .flat_map(|i| algos.iter().flat_map(move |&a| (0..runs).map(move |r| (i, a, r))))
        .collect();
    let records: Vec<(RunRow, u64)> = harness.install(|| {
        jobs.par_iter()
            .map(|&(i, algo, r)| {
                let f = &formulas[i];
                let (est, wall) = timed_estimate(f, algo, &params.with_seed(run_seed(params.seed, r)), harness.timing)?;
                Ok((RunRow::new(f, r, &est, wall), est.literals_sampled))
            })
            .collect::<Result<_>>()
    })??;

    let rows = records
        .chunks(runs as usize)
        .map(|chunk| {
            let first = &chunk[0].0;
            SweepRow {
                algo: first.algo,
                n: first.n,
                m: first.m,
                runs: runs as u64,
                mean_steps: mean(chunk.iter().map(|(r, _)| r.steps as f64)),
                mean_bits: mean(chunk.iter().map(|(r, _)| r.bits as f64)),
                mean_literals: mean(chunk.iter().map(|&(_, l)| l as f64)),
                mean_trials: mean(chunk.iter().map(|(r, _)| r.trials as f64)),
                mean_wall_ms: mean(chunk.iter().map(|(r, _)| r.wall_ms)),
            }
        })
        .collect();
    Ok((rows, records.into_iter().map(|(r, _)| r).collect()))
}
