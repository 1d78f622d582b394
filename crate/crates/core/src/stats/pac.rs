use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{binomial_slack, mean, run_seed, timed_estimate, Harness, RunRow};
use crate::baselines::{exact_count, ExactResult, DEFAULT_MAX_VARS};
use crate::error::{invalid, Result};
use crate::estimate::{Algorithm, RunParams};
use crate::formula::{generate_benchmark, BenchmarkParams, Formula};
use crate::sampling::derive_seed;

/// A formula with its exact oracle values.
#[derive(Debug, Clone)]
pub struct SuiteFormula {
    pub name: String,
    pub formula: Formula,
    pub exact: ExactResult,
}

impl SuiteFormula {
    pub fn new(name: impl Into<String>, formula: Formula) -> Result<Self> {
        let exact = exact_count(&formula, DEFAULT_MAX_VARS)?;
        Ok(SuiteFormula { name: name.into(), formula, exact })
    }
}

/// Generated accuracy suite: `n ∈ {4, 8, …, 24}`, `m ∈ {3, 4, 5, 6}·n/4`.
pub fn accuracy_suite(seed: u64) -> Result<Vec<SuiteFormula>> {
    let shapes: Vec<(usize, usize)> =
        (4..=24).step_by(4).flat_map(|n| (3..=6).map(move |k| (n, k * n / 4))).collect();
    shapes
        .par_iter()
        .enumerate()
        .map(|(i, &(n, m))| {
            let f = generate_benchmark(&BenchmarkParams::accuracy(n, m), derive_seed(seed, i as u64))?;
            SuiteFormula::new(format!("n{n}_m{m}"), f)
        })
        .collect()
}

/// Aggregates for one formula, or the pooled line when `formula == "pooled"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacRow {
    pub formula: String,
    pub algo: Algorithm,
    pub n: usize,
    pub m: usize,
    pub eps: f64,
    pub delta: f64,
    pub runs: u64,
    pub failures: u64,
    pub failure_fraction: f64,
    pub mu: f64,
    pub mean_rel_err: f64,
    #[serde(rename = "mean_N")]
    pub mean_trials: f64,
    pub mean_bits: f64,
    pub mean_steps: f64,
}

/// Per-formula and pooled failure rates of one estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacReport {
    pub algo: Algorithm,
    pub eps: f64,
    pub delta: f64,
    pub rows: Vec<PacRow>,
    pub pooled_runs: u64,
    pub pooled_failures: u64,
    /// `δ + 3·√(δ(1−δ)/pooled_runs)`.
    pub bound: f64,
}

impl PacReport {
    pub fn pooled_fraction(&self) -> f64 {
        self.pooled_failures as f64 / self.pooled_runs as f64
    }

    pub fn passed(&self) -> bool {
        self.pooled_fraction() <= self.bound
    }

    /// Rebuilds the report from per-run rows, which must be grouped by suite
    /// formula in suite order.
    pub fn from_records(suite: &[SuiteFormula], algo: Algorithm, eps: f64, delta: f64, records: &[RunRow]) -> Result<Self> {
        if suite.is_empty() || records.len() % suite.len() != 0 {
            return Err(invalid("records do not cover the suite evenly"));
        }
        let runs = records.len() / suite.len();
        if runs == 0 {
            return Err(invalid("at least one run per formula is needed"));
        }
        let mut rows = Vec::with_capacity(suite.len());
        for (sf, chunk) in suite.iter().zip(records.chunks(runs)) {
            let mu = sf.exact.mu;
            let rel = |r: &RunRow| (r.mu_hat - mu).abs() / mu;
            let failures = chunk.iter().filter(|r| (r.mu_hat - mu).abs() > eps * mu).count() as u64;
            rows.push(PacRow {
                formula: sf.name.clone(),
                algo,
                n: sf.formula.num_vars(),
                m: sf.formula.num_clauses(),
                eps,
                delta,
                runs: runs as u64,
                failures,
                failure_fraction: failures as f64 / runs as f64,
                mu,
                mean_rel_err: mean(chunk.iter().map(rel)),
                mean_trials: mean(chunk.iter().map(|r| r.trials as f64)),
                mean_bits: mean(chunk.iter().map(|r| r.bits as f64)),
                mean_steps: mean(chunk.iter().map(|r| r.steps as f64)),
            });
        }
        let pooled_runs = records.len() as u64;
        let pooled_failures = rows.iter().map(|r| r.failures).sum();
        Ok(PacReport {
            algo,
            eps,
            delta,
            rows,
            pooled_runs,
            pooled_failures,
            bound: delta + binomial_slack(delta, pooled_runs),
        })
    }

    /// Per-formula rows followed by a `pooled` row.
    pub fn table(&self) -> Vec<PacRow> {
        let mut rows = self.rows.clone();
        let w = |f: fn(&PacRow) -> f64| mean(self.rows.iter().map(f));
        rows.push(PacRow {
            formula: "pooled".into(),
            algo: self.algo,
            n: 0,
            m: 0,
            eps: self.eps,
            delta: self.delta,
            runs: self.pooled_runs,
            failures: self.pooled_failures,
            failure_fraction: self.pooled_fraction(),
            mu: f64::NAN,
            mean_rel_err: w(|r| r.mean_rel_err),
            mean_trials: w(|r| r.mean_trials),
            mean_bits: w(|r| r.mean_bits),
            mean_steps: w(|r| r.mean_steps),
        });
        rows
    }
}

/// Runs `runs` estimates per suite formula; run `i` uses seed `params.seed ⊕ i`.
/// Rows come back grouped by formula, then by run index.
pub fn pac_runs(
    suite: &[SuiteFormula],
    algo: Algorithm,
    params: &RunParams,
    runs: u32,
    harness: &Harness,
) -> Result<Vec<RunRow>> {
    let jobs: Vec<(usize, u32)> = (0..suite.len()).flat_map(|s| (0..runs).map(move |r| (s, r))).collect();
    harness.install(|| {
        jobs.par_iter()
            .map(|&(s, r)| {
                let f = &suite[s].formula;
                let (est, wall) = timed_estimate(f, algo, &params.with_seed(run_seed(params.seed, r)), harness.timing)?;
                Ok(RunRow::new(f, r, &est, wall))
            })
            .collect()
    })?
}

/// PAC validation: a run fails when `|μ̂ − μ| > εμ`.
pub fn pac_validate(
    suite: &[SuiteFormula],
    algo: Algorithm,
    params: &RunParams,
    runs: u32,
    harness: &Harness,
) -> Result<PacReport> {
    let records = pac_runs(suite, algo, params, runs, harness)?;
    PacReport::from_records(suite, algo, params.epsilon, params.delta, &records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_shapes() {
        let suite = accuracy_suite(1).unwrap();
        assert_eq!(suite.len(), 24);
        assert_eq!(suite[0].name, "n4_m3");
        assert_eq!(suite[23].name, "n24_m36");
        assert!(suite.iter().all(|s| s.exact.p > 0.0 && s.exact.p <= 1.0));
    }

    #[test]
    fn single_clause_never_fails() {
        let suite = [SuiteFormula::new("unit", Formula::from_dimacs_clauses(3, &[&[1, -2]]).unwrap()).unwrap()];
        for algo in Algorithm::ESTIMATORS {
            let rep = pac_validate(&suite, algo, &RunParams::new(0.1, 0.05, 3), 1, &Harness::default()).unwrap();
            assert_eq!(rep.pooled_failures, 0);
            assert_eq!(rep.rows[0].mean_rel_err, 0.0);
        }
    }

    #[test]
    fn report_is_reproducible_from_records() {
        let suite = [
            SuiteFormula::new("a", Formula::from_dimacs_clauses(2, &[&[1], &[2]]).unwrap()).unwrap(),
            SuiteFormula::new("b", Formula::from_dimacs_clauses(3, &[&[1, 2], &[-3]]).unwrap()).unwrap(),
        ];
        let params = RunParams::new(0.2, 0.1, 11);
        let records = pac_runs(&suite, Algorithm::Main, &params, 5, &Harness::default()).unwrap();
        let rep = PacReport::from_records(&suite, Algorithm::Main, 0.2, 0.1, &records).unwrap();
        assert_eq!(rep, pac_validate(&suite, Algorithm::Main, &params, 5, &Harness::default()).unwrap());
        assert_eq!(rep.pooled_runs, 10);
        assert_eq!(rep.table().len(), 3);
        assert_eq!(records[6].run, 1);
        assert_eq!(records[6].seed, 11 ^ 1);
    }
}
