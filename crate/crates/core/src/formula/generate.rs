//! Synthetic benchmark formulas built around shared "stems".
//!
//! Each stem is a random partial clause of `gamma` literals. Every stem is
//! extended `⌈m/alpha⌉` times by `1..=lambda` further random literals, so
//! clauses sharing a stem overlap heavily. Stems are drawn until the formula
//! holds `m` distinct clauses.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{Clause, Formula, Literal, Var, Weights};
use crate::error::{invalid, Error, Result};
use crate::sampling::InstrumentedRng;

/// Consecutive duplicate draws tolerated before a stem is abandoned.
const SLOT_RETRIES: usize = 16;

/// Parameters of the stem generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkParams {
    pub n: usize,
    pub m: usize,
    /// Stem count divisor: each stem yields `⌈m/alpha⌉` clauses.
    pub alpha: usize,
    /// Literals per stem.
    pub gamma: usize,
    /// Maximum number of literals added to a stem.
    pub lambda: usize,
}

fn floor_log2_scaled(m: usize, divisor: f64) -> usize {
    ((m as f64).log2() / divisor).floor() as usize
}

impl BenchmarkParams {
    /// Size-scaling recipe: `m = n`, `alpha = 2`, `gamma = ⌊log₂m / 10⌋`, `lambda = ⌊2 log₂m⌋`.
    pub fn scaling(n: usize) -> Self {
        let m = n;
        BenchmarkParams {
            n,
            m,
            alpha: 2,
            gamma: floor_log2_scaled(m, 10.0),
            lambda: floor_log2_scaled(m, 0.5),
        }
    }

    /// Randomness-comparison recipe: `m = n`, `alpha = 8`, `gamma = ⌊log₂m / 4⌋`, `lambda = ⌊2 log₂m⌋`.
    pub fn randomness(n: usize) -> Self {
        let m = n;
        BenchmarkParams {
            n,
            m,
            alpha: 8,
            gamma: floor_log2_scaled(m, 4.0),
            lambda: floor_log2_scaled(m, 0.5),
        }
    }

    /// Small-formula recipe for exact-oracle accuracy suites: `alpha = 2`,
    /// `gamma = 1`, `lambda = min(⌊2 log₂m⌋, n − 1)`.
    pub fn accuracy(n: usize, m: usize) -> Self {
        BenchmarkParams {
            n,
            m,
            alpha: 2,
            gamma: 1,
            lambda: floor_log2_scaled(m, 0.5).clamp(1, n.saturating_sub(1).max(1)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(invalid("n and m must be positive"));
        }
        if self.alpha == 0 {
            return Err(invalid("alpha must be at least 1"));
        }
        if self.lambda == 0 {
            return Err(invalid("lambda must be at least 1"));
        }
        if self.gamma + self.lambda > self.n {
            return Err(invalid(format!(
                "gamma + lambda = {} exceeds n = {}",
                self.gamma + self.lambda,
                self.n
            )));
        }
        if self.n > Var::MAX as usize {
            return Err(invalid("n exceeds the variable index range"));
        }
        Ok(())
    }
}

/// Draws a fresh variable not already in `taken`, resampling collisions.
fn fresh_var(rng: &mut InstrumentedRng, n: usize, taken: &[Literal]) -> Var {
    loop {
        let v = rng.uniform_index(n) as Var;
        if !taken.iter().any(|l| l.var == v) {
            return v;
        }
    }
}

/// Generates an unweighted benchmark formula; a pure function of `params` and `seed`.
pub fn generate_benchmark(params: &BenchmarkParams, seed: u64) -> Result<Formula> {
    params.validate()?;
    let BenchmarkParams { n, m, alpha, gamma, lambda } = *params;
    let per_stem = m.div_ceil(alpha);
    let budget = 100 * m;

    let mut rng = InstrumentedRng::new(seed);
    let mut seen: HashSet<Clause> = HashSet::with_capacity(m);
    let mut clauses: Vec<Clause> = Vec::with_capacity(m);
    let mut draws = 0usize;

    'stems: while clauses.len() < m {
        let mut stem: Vec<Literal> = Vec::with_capacity(gamma);
        for _ in 0..gamma {
            let var = fresh_var(&mut rng, n, &stem);
            stem.push(Literal { var, positive: rng.next_bit() });
        }

        for _ in 0..per_stem {
            if clauses.len() == m {
                break 'stems;
            }
            let mut retries = 0;
            loop {
                draws += 1;
                if draws > budget {
                    return Err(Error::Infeasible(format!(
                        "only {} distinct clauses after {budget} draws (target m = {m})",
                        clauses.len()
                    )));
                }
                let extra = 1 + rng.uniform_index(lambda);
                let mut lits = stem.clone();
                for _ in 0..extra {
                    let var = fresh_var(&mut rng, n, &lits);
                    lits.push(Literal { var, positive: rng.next_bit() });
                }
                let clause = Clause::new(lits).expect("fresh variables keep clauses consistent");
                if seen.insert(clause.clone()) {
                    clauses.push(clause);
                    break;
                }
                retries += 1;
                if retries >= SLOT_RETRIES {
                    continue 'stems;
                }
            }
        }
    }

    Formula::new(n, clauses, Weights::uniform(n))
}
