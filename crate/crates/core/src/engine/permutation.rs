//! Clause ordering: a heuristic order blended with uniform random picks.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::formula::Formula;
use crate::sampling::InstrumentedRng;

const REMOVED: u32 = u32::MAX;

/// A clause order `π` (position → original clause index).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlendedPermutation {
    order: Vec<u32>,
    beta: f64,
    seed: u64,
    bits: u64,
}

impl BlendedPermutation {
    /// Wraps an explicit order, e.g. for tests that fix `π`.
    pub fn from_order(order: Vec<u32>) -> Result<Self> {
        let m = order.len();
        let mut seen = vec![false; m];
        for &c in &order {
            let c = c as usize;
            if c >= m || std::mem::replace(&mut seen[c], true) {
                return Err(invalid("clause order is not a permutation"));
            }
        }
        Ok(BlendedPermutation { order, beta: 0.0, seed: 0, bits: 0 })
    }

    pub fn identity(m: usize) -> Self {
        BlendedPermutation { order: (0..m as u32).collect(), beta: 0.0, seed: 0, bits: 0 }
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Random bits spent building the order.
    pub fn bits(&self) -> u64 {
        self.bits
    }
}

/// Clause indices by ascending width, ties by original index.
pub fn width_heuristic(f: &Formula) -> Vec<u32> {
    let mut h: Vec<u32> = (0..f.num_clauses() as u32).collect();
    h.sort_by_key(|&i| f.clause(i as usize).width());
    h
}

/// Probability of a uniform pick at one step: `β · min{1, v'/w'}`, where `v'`
/// is the width of the next heuristic clause and `w'` the mean remaining width.
pub fn random_pick_probability(beta: f64, next_width: f64, mean_width: f64) -> f64 {
    beta * (next_width / mean_width).min(1.0)
}

/// Blends `heuristic` with uniform picks at rate `beta`, seeded by `seed`.
pub fn blend_permutation(
    f: &Formula,
    beta: f64,
    seed: u64,
    heuristic: &[u32],
) -> Result<BlendedPermutation> {
    let mut rng = InstrumentedRng::new(seed);
    let mut p = blend_with_rng(f, beta, &mut rng, heuristic)?;
    p.seed = seed;
    Ok(p)
}

pub(crate) fn blend_with_rng(
    f: &Formula,
    beta: f64,
    rng: &mut InstrumentedRng,
    heuristic: &[u32],
) -> Result<BlendedPermutation> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(invalid(format!("beta = {beta} must lie in [0, 1]")));
    }
    let m = f.num_clauses();
    if heuristic.len() != m {
        return Err(invalid("heuristic order must cover every clause"));
    }
    BlendedPermutation::from_order(heuristic.to_vec())?;
    let bits_before = rng.bits_consumed();

    let width = |c: u32| f.clause(c as usize).width() as u64;
    // Remaining clause set: swap-remove pool plus position map.
    let mut pool: Vec<u32> = (0..m as u32).collect();
    let mut pos: Vec<u32> = (0..m as u32).collect();
    let mut remaining_width: u64 = f.total_width() as u64;
    let mut cursor = 0usize;
    let mut order = Vec::with_capacity(m);

    for _ in 0..m {
        while pos[heuristic[cursor] as usize] == REMOVED {
            cursor += 1;
        }
        let next = heuristic[cursor];
        let pick = if beta > 0.0 {
            let mean = remaining_width as f64 / pool.len() as f64;
            let q = random_pick_probability(beta, width(next) as f64, mean);
            if rng.bernoulli(q) {
                pool[rng.uniform_index(pool.len())]
            } else {
                next
            }
        } else {
            next
        };

        let at = pos[pick as usize] as usize;
        let last = *pool.last().expect("pool non-empty while clauses remain");
        pool.swap_remove(at);
        if last != pick {
            pos[last as usize] = at as u32;
        }
        pos[pick as usize] = REMOVED;
        remaining_width -= width(pick);
        order.push(pick);
    }

    Ok(BlendedPermutation { order, beta, seed: rng.seed(), bits: rng.bits_consumed() - bits_before })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn formula(widths: &[usize]) -> Formula {
        let n = widths.iter().copied().max().unwrap();
        let clauses: Vec<Vec<i64>> = widths.iter().map(|&w| (1..=w as i64).collect()).collect();
        let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
        Formula::from_dimacs_clauses(n, &refs).unwrap()
    }

    #[test]
    fn beta_zero_is_heuristic() {
        let f = formula(&[3, 1, 2, 1, 5, 2]);
        let h = width_heuristic(&f);
        assert_eq!(h, vec![1, 3, 2, 5, 0, 4]);
        let p = blend_permutation(&f, 0.0, 99, &h).unwrap();
        assert_eq!(p.order(), h.as_slice());
        assert_eq!(p.bits(), 0);
    }

    #[test]
    fn beta_one_is_a_permutation() {
        let f = formula(&[3, 1, 2, 1, 5, 2, 4, 4, 1]);
        let h = width_heuristic(&f);
        for seed in 0..50 {
            let p = blend_permutation(&f, 1.0, seed, &h).unwrap();
            let mut sorted = p.order().to_vec();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..9).collect::<Vec<u32>>());
        }
    }

    #[test]
    fn first_step_probability_example() {
        // widths [1, 2, 3]: v' = 1, w' = 2
        assert_eq!(random_pick_probability(0.01, 1.0, 2.0), 0.005);
        assert_eq!(random_pick_probability(0.5, 4.0, 2.0), 0.5);
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = formula(&[1, 2]);
        assert!(blend_permutation(&f, 1.5, 0, &[0, 1]).is_err());
        assert!(blend_permutation(&f, -0.1, 0, &[0, 1]).is_err());
        assert!(blend_permutation(&f, 0.5, 0, &[0, 0]).is_err());
        assert!(blend_permutation(&f, 0.5, 0, &[0]).is_err());
        assert!(BlendedPermutation::from_order(vec![0, 2]).is_err());
    }
}
