use super::store::{lit_positive, lit_var, ClauseStore, LazyAssignment};
use crate::sampling::InstrumentedRng;

/// Work counters of one trial.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrialStats {
    /// Clauses inspected (excluding the sampled clause).
    pub steps: u64,
    /// Variables given a value by lazy sampling.
    pub literals_sampled: u64,
    /// Random bits charged to this trial.
    pub bits: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub success: bool,
    /// Position of the sampled clause.
    pub sampled_position: usize,
    /// Satisfied clauses counted before the walk ended (includes the sampled clause).
    pub satisfied_seen: u64,
    pub stats: TrialStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Abort once more than `⌊1/Q⌋` true clauses are seen, and abandon each
    /// clause at its first false literal.
    ShortCircuit,
    /// Evaluate every clause in full and decide by `L ≤ ⌊1/Q⌋` at the end.
    /// Same success distribution; only used to validate the short-circuit path.
    Exhaustive,
}

#[inline]
fn draw_value(store: &ClauseStore, rng: &mut InstrumentedRng, v: u32) -> bool {
    if store.is_unweighted() {
        rng.next_bit()
    } else {
        rng.bernoulli(store.rho(v))
    }
}

/// Runs one trial on a cleared assignment and leaves it cleared.
///
/// Samples a clause by weight, fixes its literals, draws `Q`, then walks the
/// remaining clauses in store order, counting satisfied ones in `ℓ` (starting
/// at 1 for the sampled clause). The trial fails as soon as `ℓ > ⌊1/Q⌋` and
/// succeeds if the walk finishes first, which happens with probability
/// `E[1/L]` whatever the clause order.
pub fn run_trial(
    store: &ClauseStore,
    asg: &mut LazyAssignment,
    rng: &mut InstrumentedRng,
    mode: EvalMode,
) -> TrialOutcome {
    let bits_before = rng.bits_consumed();
    let m = store.num_clauses();

    let s = store.alias().sample(rng);
    for &l in store.packed_clause(s) {
        asg.assign(lit_var(l), lit_positive(l));
    }
    let k = rng.uniform_q().floor_inverse(m as u64 + 1);

    let mut ell: u64 = 1;
    let mut steps: u64 = 0;
    let mut sampled: u64 = 0;
    let mut last: Option<usize> = None;
    let mut aborted = false;

    for pos in 0..m {
        if pos == s {
            continue;
        }
        steps += 1;
        last = Some(pos);
        let mut satisfied = true;
        for &l in store.packed_clause(pos) {
            let v = lit_var(l);
            let value = match asg.get(v) {
                Some(b) => b,
                None => {
                    let b = draw_value(store, rng, v);
                    asg.assign(v, b);
                    sampled += 1;
                    b
                }
            };
            if value != lit_positive(l) {
                satisfied = false;
                if mode == EvalMode::ShortCircuit {
                    break;
                }
            }
        }
        if satisfied {
            ell += 1;
            if mode == EvalMode::ShortCircuit && ell > k {
                aborted = true;
                break;
            }
        }
    }

    if let Some(pos) = last {
        asg.clear_prefix(store.prefix_max()[pos]);
    }
    for &l in store.packed_clause(s) {
        asg.unassign(lit_var(l));
    }

    TrialOutcome {
        success: !aborted && ell <= k,
        sampled_position: s,
        satisfied_seen: ell,
        stats: TrialStats { steps, literals_sampled: sampled, bits: rng.bits_consumed() - bits_before },
    }
}
