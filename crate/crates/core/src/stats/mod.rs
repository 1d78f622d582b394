//! Validation harnesses: PAC accuracy against the exact oracle, per-permutation
//! trial success rates, and size sweeps over generated benchmarks.
//!
//! Runs are independent and may execute on a worker pool; results are always
//! collected in (formula, algorithm, run) order, so output does not depend on
//! the worker count.

mod lemma;
mod pac;
mod sweep;

pub use lemma::{lemma_suite, permutation_rates, PermutationRate};
pub use pac::{accuracy_suite, pac_runs, pac_validate, PacReport, PacRow, SuiteFormula};
pub use sweep::{scaling_sweep, Recipe, SweepRow};

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estimate::{estimate, Algorithm, Estimate, RunParams};
use crate::formula::Formula;

/// Header of the per-run CSV emitted by `bench` and `verify`.
pub const RUN_CSV_HEADER: &str = "algo,n,m,eps,delta,seed,run,mu_hat,p_hat,N,Y,steps,bits,wall_ms";

/// Execution options shared by the harnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Harness {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Record wall-clock time; when off every `wall_ms` is 0.
    pub timing: bool,
}

impl Harness {
    pub fn with_workers(workers: usize) -> Self {
        Harness { workers: Some(workers), timing: true }
    }

    /// Runs `op` inside a pool of the configured size.
    pub fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> Result<R> {
        match self.workers {
            None => Ok(op()),
            Some(0) => Err(invalid("worker count must be at least 1")),
            Some(w) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(w)
                    .build()
                    .map_err(|e| Error::Io(std::io::Error::other(e)))?;
                Ok(pool.install(op))
            }
        }
    }
}

/// Seed of run `run` given the base seed.
pub fn run_seed(seed: u64, run: u32) -> u64 {
    seed ^ run as u64
}

/// Binomial slack `3·√(δ(1−δ)/runs)` added to every "failure rate ≤ δ" check.
pub fn binomial_slack(delta: f64, runs: u64) -> f64 {
    3.0 * (delta * (1.0 - delta) / runs as f64).sqrt()
}

/// One estimator run as a CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub algo: Algorithm,
    pub n: usize,
    pub m: usize,
    pub eps: f64,
    pub delta: f64,
    pub seed: u64,
    pub run: u32,
    pub mu_hat: f64,
    pub p_hat: f64,
    #[serde(rename = "N")]
    pub trials: u64,
    #[serde(rename = "Y")]
    pub successes: u64,
    pub steps: u64,
    pub bits: u64,
    pub wall_ms: f64,
}

impl RunRow {
    pub fn new(f: &Formula, run: u32, est: &Estimate, wall_ms: f64) -> Self {
        RunRow {
            algo: est.algo,
            n: f.num_vars(),
            m: f.num_clauses(),
            eps: est.eps,
            delta: est.delta,
            seed: est.seed,
            run,
            mu_hat: est.mu_hat,
            p_hat: est.p_hat,
            trials: est.trials,
            successes: est.successes,
            steps: est.steps,
            bits: est.bits,
            wall_ms,
        }
    }
}

/// Runs one estimator and measures it.
pub fn timed_estimate(
    f: &Formula,
    algo: Algorithm,
    params: &RunParams,
    timing: bool,
) -> Result<(Estimate, f64)> {
    let start = Instant::now();
    let est = estimate(f, algo, params)?;
    let wall_ms = if timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    Ok((est, wall_ms))
}

/// Writes serializable rows as CSV with a header line.
pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut count) = (crate::numeric::CompensatedSum::new(), 0usize);
    for v in values {
        sum.add(v);
        count += 1;
    }
    if count == 0 {
        f64::NAN
    } else {
        sum.value() / count as f64
    }
}
