//! Karp–Luby–Madras style estimators: lazy (L-KLM) and eager (KLM).
//!
//! Each trial samples a clause `C_s` by weight, fixes its literals, then draws
//! clauses uniformly with replacement until one is satisfied. The number of
//! draws `Y` over `N` trials gives `p̂ = Y / (N·m)`.

use crate::engine::{check_eps_delta, check_interior_weights, lit_positive, lit_var};
use crate::engine::{BlendedPermutation, ClauseStore, LazyAssignment};
use crate::error::{invalid, Result};
use crate::estimate::{Algorithm, Estimate};
use crate::formula::Formula;
use crate::sampling::{derive_seed, InstrumentedRng};

const TRIAL_STREAM: u64 = 2;

/// `T = ⌈8(1+ε)·m·ln(3/δ) / ((1 − ε²/8)·ε²)⌉`.
pub fn compute_t_lklm(epsilon: f64, delta: f64, m: usize) -> Result<u64> {
    check_eps_delta(epsilon, delta)?;
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    Ok(lklm_threshold_real(epsilon, delta, m).ceil() as u64)
}

/// The threshold before rounding.
pub fn lklm_threshold_real(epsilon: f64, delta: f64, m: usize) -> f64 {
    let e2 = epsilon * epsilon;
    8.0 * (1.0 + epsilon) * m as f64 * (3.0 / delta).ln() / ((1.0 - e2 / 8.0) * e2)
}

#[inline]
fn draw_value(store: &ClauseStore, rng: &mut InstrumentedRng, v: u32) -> bool {
    if store.is_unweighted() {
        rng.next_bit()
    } else {
        rng.bernoulli(store.rho(v))
    }
}

struct Counters {
    target: u64,
    y: u64,
    n: u64,
    sampled: u64,
}

fn finish(
    algo: Algorithm,
    f: &Formula,
    store: &ClauseStore,
    c: Counters,
    rng: &InstrumentedRng,
    eps: f64,
    delta: f64,
    seed: u64,
) -> Estimate {
    let m = store.num_clauses() as f64;
    let p_hat = c.y as f64 / (c.n as f64 * m);
    let rho_phi = store.rho_phi();
    Estimate {
        algo,
        mu_hat: rho_phi * p_hat,
        p_hat,
        rho_phi,
        target: c.target,
        trials: c.n,
        successes: c.y,
        steps: c.y,
        literals_sampled: c.sampled,
        bits: rng.bits_consumed(),
        seed,
        eps,
        delta,
        beta: None,
        weight_margin: f.weights().margin(),
        history: None,
    }
}

/// Lazy-sampling KLM. Variables are drawn only when an inspected clause needs
/// them (literal by literal, stopping at the first false literal) and are
/// cleared one by one after each trial.
pub fn estimate_lklm(f: &Formula, epsilon: f64, delta: f64, seed: u64) -> Result<Estimate> {
    check_interior_weights(f)?;
    let m = f.num_clauses();
    let target = compute_t_lklm(epsilon, delta, m)?;
    let store = ClauseStore::build(f, &BlendedPermutation::identity(m))?;
    let mut rng = InstrumentedRng::new(derive_seed(seed, TRIAL_STREAM));
    let mut asg = LazyAssignment::new(store.num_vars());
    let mut touched: Vec<u32> = Vec::new();
    let mut c = Counters { target, y: 0, n: 0, sampled: 0 };

    while c.y < target {
        let s = store.alias().sample(&mut rng);
        for &l in store.packed_clause(s) {
            asg.assign(lit_var(l), lit_positive(l));
            touched.push(lit_var(l));
        }
        loop {
            let k = rng.uniform_index(m);
            c.y += 1;
            let mut satisfied = true;
            for &l in store.packed_clause(k) {
                let v = lit_var(l);
                let value = match asg.get(v) {
                    Some(b) => b,
                    None => {
                        let b = draw_value(&store, &mut rng, v);
                        asg.assign(v, b);
                        touched.push(v);
                        c.sampled += 1;
                        b
                    }
                };
                if value != lit_positive(l) {
                    satisfied = false;
                    break;
                }
            }
            if satisfied {
                break;
            }
        }
        c.n += 1;
        for v in touched.drain(..) {
            asg.unassign(v);
        }
    }
    debug_assert!(asg.is_clear());
    Ok(finish(Algorithm::Lklm, f, &store, c, &rng, epsilon, delta, seed))
}

/// Eager KLM: every trial draws all `n` variables up front, then forces `C_s`.
pub fn estimate_klm(f: &Formula, epsilon: f64, delta: f64, seed: u64) -> Result<Estimate> {
    check_interior_weights(f)?;
    let m = f.num_clauses();
    let target = compute_t_lklm(epsilon, delta, m)?;
    let store = ClauseStore::build(f, &BlendedPermutation::identity(m))?;
    let n = store.num_vars();
    let mut rng = InstrumentedRng::new(derive_seed(seed, TRIAL_STREAM));
    let mut asg = LazyAssignment::new(n);
    let mut c = Counters { target, y: 0, n: 0, sampled: 0 };

    while c.y < target {
        let s = store.alias().sample(&mut rng);
        for v in 0..n as u32 {
            let b = draw_value(&store, &mut rng, v);
            asg.assign(v, b);
        }
        c.sampled += n as u64;
        for &l in store.packed_clause(s) {
            asg.assign(lit_var(l), lit_positive(l));
        }
        loop {
            let k = rng.uniform_index(m);
            c.y += 1;
            let satisfied = store
                .packed_clause(k)
                .iter()
                .all(|&l| asg.get(lit_var(l)) == Some(lit_positive(l)));
            if satisfied {
                break;
            }
        }
        c.n += 1;
        asg.clear_all();
    }
    Ok(finish(Algorithm::Klm, f, &store, c, &rng, epsilon, delta, seed))
}
