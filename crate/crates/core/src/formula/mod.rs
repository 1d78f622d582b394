//! DNF formulas: literals, clauses, per-variable weights, and evaluation.
//!
//! A [`Formula`] is a disjunction of [`Clause`]s over `n` variables together
//! with a weight function giving, for each variable, the probability that the
//! positive literal is drawn. Unweighted counting is the case where every
//! variable has weight `1/2`.

mod dimacs;
mod generate;

pub use dimacs::{parse_dnf, serialize_dnf};
pub use generate::{generate_benchmark, BenchmarkParams};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Index of a propositional variable, `0..n`.
pub type Var = u32;

/// A variable or its negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: Var,
    pub positive: bool,
}

impl Literal {
    pub const fn pos(var: Var) -> Self {
        Literal { var, positive: true }
    }

    pub const fn neg(var: Var) -> Self {
        Literal { var, positive: false }
    }

    /// Converts a signed 1-based DIMACS literal.
    pub fn from_dimacs(lit: i64) -> Option<Self> {
        if lit == 0 {
            return None;
        }
        let var = Var::try_from(lit.unsigned_abs() - 1).ok()?;
        Some(Literal { var, positive: lit > 0 })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }

    #[inline]
    pub fn satisfied_by(self, value: bool) -> bool {
        value == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var + 1)
        } else {
            write!(f, "¬x{}", self.var + 1)
        }
    }
}

/// A non-empty, contradiction-free conjunction of literals, stored sorted by variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Clause(Vec<Literal>);

impl Clause {
    /// Builds a clause, sorting literals and collapsing repeats.
    ///
    /// Fails on an empty literal set or when a variable occurs with both signs.
    pub fn new(mut literals: Vec<Literal>) -> Result<Self> {
        if literals.is_empty() {
            return Err(Error::InvalidFormula("empty clause".into()));
        }
        literals.sort_unstable();
        literals.dedup();
        if let Some(w) = literals.windows(2).find(|w| w[0].var == w[1].var) {
            return Err(Error::InvalidFormula(format!(
                "contradictory clause on variable x{}",
                w[0].var + 1
            )));
        }
        Ok(Clause(literals))
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    /// Clause width `W(C)`.
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.0.iter().all(|l| l.satisfied_by(assignment[l.var as usize]))
    }

    fn max_var(&self) -> Var {
        // sorted by variable
        self.0.last().map(|l| l.var).unwrap_or(0)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∧ ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Per-variable probability that the positive literal is drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Weights(Vec<f64>);

impl Weights {
    pub fn uniform(n: usize) -> Self {
        Weights(vec![0.5; n])
    }

    pub fn new(rho: Vec<f64>) -> Result<Self> {
        if let Some((v, r)) = rho.iter().enumerate().find(|(_, r)| !(0.0..=1.0).contains(*r)) {
            return Err(Error::InvalidFormula(format!(
                "weight {r} of variable x{} outside [0, 1]",
                v + 1
            )));
        }
        Ok(Weights(rho))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `ρ(v)`.
    #[inline]
    pub fn var(&self, v: Var) -> f64 {
        self.0[v as usize]
    }

    /// `ρ(a)`, with `ρ(¬v) = 1 − ρ(v)`.
    #[inline]
    pub fn literal(&self, l: Literal) -> f64 {
        let r = self.0[l.var as usize];
        if l.positive {
            r
        } else {
            1.0 - r
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn is_unweighted(&self) -> bool {
        self.0.iter().all(|&r| r == 0.5)
    }

    /// Smallest `min(ρ(v), 1 − ρ(v))` over all variables; `0.5` when unweighted.
    pub fn margin(&self) -> f64 {
        self.0.iter().map(|&r| r.min(1.0 - r)).fold(0.5, f64::min)
    }
}

/// A weighted DNF formula over variables `0..n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Formula {
    n: usize,
    clauses: Vec<Clause>,
    weights: Weights,
}

impl Formula {
    pub fn new(n: usize, clauses: Vec<Clause>, weights: Weights) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::InvalidFormula("a formula needs at least one clause".into()));
        }
        if n > Var::MAX as usize {
            return Err(Error::InvalidFormula(format!("{n} variables exceed the index range")));
        }
        if weights.len() != n {
            return Err(Error::InvalidFormula(format!(
                "{} weights for {n} variables",
                weights.len()
            )));
        }
        if let Some(c) = clauses.iter().find(|c| c.max_var() as usize >= n) {
            return Err(Error::InvalidFormula(format!("clause `{c}` references a variable ≥ n = {n}")));
        }
        Ok(Formula { n, clauses, weights })
    }

    /// Unweighted formula from signed 1-based literal lists.
    pub fn from_dimacs_clauses(n: usize, clauses: &[&[i64]]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|lits| {
                let lits = lits
                    .iter()
                    .map(|&l| {
                        Literal::from_dimacs(l)
                            .ok_or_else(|| Error::InvalidFormula(format!("bad literal {l}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Clause::new(lits)
            })
            .collect::<Result<Vec<_>>>()?;
        Formula::new(n, clauses, Weights::uniform(n))
    }

    pub fn with_weights(self, weights: Weights) -> Result<Self> {
        Formula::new(self.n, self.clauses, weights)
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, i: usize) -> &Clause {
        &self.clauses[i]
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    /// Total literal count `W(Φ) = m·w`.
    pub fn total_width(&self) -> usize {
        self.clauses.iter().map(Clause::width).sum()
    }

    /// `ln ρ(C_i)`.
    pub fn clause_log_weight(&self, i: usize) -> f64 {
        self.clauses[i]
            .literals()
            .iter()
            .map(|&l| self.weights.literal(l).ln())
            .sum()
    }

    /// `ρ(C_i) = ∏_{a ∈ C_i} ρ(a)`; wide clauses are accumulated in log space.
    pub fn clause_weight(&self, i: usize) -> f64 {
        let c = &self.clauses[i];
        if c.width() > 64 {
            self.clause_log_weight(i).exp()
        } else {
            c.literals().iter().map(|&l| self.weights.literal(l)).product()
        }
    }

    /// `ρ(Φ) = Σ_i ρ(C_i)`. A sum of clause weights, so it may exceed 1.
    pub fn formula_weight(&self) -> f64 {
        (0..self.clauses.len())
            .map(|i| self.clause_weight(i))
            .collect::<CompensatedSum>()
            .value()
    }

    /// Number of clauses satisfied by a full assignment.
    pub fn count_true_clauses(&self, assignment: &[bool]) -> usize {
        assert_eq!(assignment.len(), self.n, "assignment must cover every variable");
        self.clauses.iter().filter(|c| c.satisfied_by(assignment)).count()
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.count_true_clauses(assignment) >= 1
    }
}
