//! Brute-force enumeration oracles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::numeric::CompensatedSum;

/// Default cap on `n` for enumeration (2^26 assignments).
pub const DEFAULT_MAX_VARS: usize = 26;
/// Assignments are packed into `u64` masks.
const HARD_MAX_VARS: usize = 40;

/// Exact quantities of a formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    /// Weighted model ratio `μ = Σ_{ν ⊨ Φ} ρ(ν)`.
    pub mu: f64,
    /// Number of satisfying assignments, ignoring weights.
    pub model_count: u64,
    /// Trial success probability `p = μ / ρ(Φ)`.
    pub p: f64,
    pub rho_phi: f64,
}

/// Clause as bit masks over variables.
#[derive(Clone, Copy)]
struct MaskClause {
    pos: u64,
    neg: u64,
}

impl MaskClause {
    #[inline]
    fn satisfied(self, a: u64) -> bool {
        a & self.pos == self.pos && a & self.neg == 0
    }
}

fn mask_clauses(f: &Formula) -> Vec<MaskClause> {
    f.clauses()
        .iter()
        .map(|c| {
            let mut mc = MaskClause { pos: 0, neg: 0 };
            for l in c.literals() {
                if l.positive {
                    mc.pos |= 1 << l.var;
                } else {
                    mc.neg |= 1 << l.var;
                }
            }
            mc
        })
        .collect()
}

fn check_cap(n: usize, max_n: usize) -> Result<()> {
    let cap = max_n.min(HARD_MAX_VARS);
    if n > cap {
        return Err(Error::OracleCap { n, cap });
    }
    Ok(())
}

/// Product weights of all assignments to `count` variables starting at `first`,
/// restricted to variables in `free` (others contribute a factor 1).
fn half_table(f: &Formula, first: usize, count: usize, free: u64) -> Vec<f64> {
    let mut table = vec![1.0f64; 1 << count];
    for i in 0..count {
        let v = first + i;
        if free >> v & 1 == 0 {
            continue;
        }
        let r = f.weights().var(v as u32);
        for (idx, w) in table.iter_mut().enumerate() {
            *w *= if idx >> i & 1 == 1 { r } else { 1.0 - r };
        }
    }
    table
}

/// Enumerates all `2^n` assignments: `μ`, the model count, and `p = μ / ρ(Φ)`.
pub fn exact_count(f: &Formula, max_n: usize) -> Result<ExactResult> {
    let n = f.num_vars();
    check_cap(n, max_n)?;
    let clauses = mask_clauses(f);
    let low_bits = n / 2;
    let high_bits = n - low_bits;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let low = half_table(f, 0, low_bits, all);
    let high = half_table(f, low_bits, high_bits, all);

    // One block per high half; blocks are summed in index order for determinism.
    let blocks: Vec<(u64, CompensatedSum)> = (0..1u64 << high_bits)
        .into_par_iter()
        .map(|h| {
            let mut count = 0u64;
            let mut sum = CompensatedSum::new();
            for l in 0..1u64 << low_bits {
                let a = h << low_bits | l;
                if clauses.iter().any(|c| c.satisfied(a)) {
                    count += 1;
                    sum.add(low[l as usize]);
                }
            }
            let mut scaled = CompensatedSum::new();
            scaled.add(sum.value() * high[h as usize]);
            (count, scaled)
        })
        .collect();

    let mut model_count = 0u64;
    let mut mu = CompensatedSum::new();
    for (c, s) in blocks {
        model_count += c;
        mu.merge(s);
    }
    let mu = mu.value();
    let rho_phi = f.formula_weight();
    Ok(ExactResult { mu, model_count, p: mu / rho_phi, rho_phi })
}

/// `E[1/L]` under the coverage process, by direct enumeration: for each clause
/// `C_s` (probability `ρ(C_s)/ρ(Φ)`), every completion of the variables outside
/// `C_s` is weighted by its probability and by `1/L`.
///
/// Algebraically equal to `μ / ρ(Φ)`; computed independently of [`exact_count`].
pub fn coverage_expectation(f: &Formula, max_n: usize) -> Result<f64> {
    let n = f.num_vars();
    check_cap(n, max_n)?;
    let clauses = mask_clauses(f);
    let low_bits = n / 2;
    let high_bits = n - low_bits;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let low_mask = (1u64 << low_bits) - 1;
    let rho_phi = f.formula_weight();

    let per_clause: Vec<f64> = clauses
        .par_iter()
        .enumerate()
        .map(|(s, cs)| {
            let fixed = cs.pos;
            let free = all & !(cs.pos | cs.neg);
            let low = half_table(f, 0, low_bits, free);
            let high = half_table(f, low_bits, high_bits, free);
            let mut acc = CompensatedSum::new();
            // Walk all submasks of `free` (including 0).
            let mut sub = 0u64;
            loop {
                let a = fixed | sub;
                let l_count = clauses.iter().filter(|c| c.satisfied(a)).count();
                debug_assert!(l_count >= 1);
                let w = low[(a & low_mask) as usize] * high[(a >> low_bits) as usize];
                acc.add(w / l_count as f64);
                sub = sub.wrapping_sub(free) & free;
                if sub == 0 {
                    break;
                }
            }
            f.clause_weight(s) * acc.value()
        })
        .collect();

    let total: CompensatedSum = per_clause.into_iter().collect();
    Ok(total.value() / rho_phi)
}
