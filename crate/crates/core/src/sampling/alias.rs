use super::InstrumentedRng;
use crate::error::{invalid, Error, Result};
use crate::numeric::{mul_high, CompensatedSum};

const TWO_POW_M53: f64 = 1.0 / 9_007_199_254_740_992.0;

/// Walker–Vose alias table: O(m) construction, O(1) sampling.
///
/// Slot `j` keeps index `j` with probability `threshold[j]` and otherwise
/// redirects to `alias[j]`.
#[derive(Debug, Clone)]
pub struct AliasTable {
    threshold: Vec<f64>,
    alias: Vec<u32>,
    total_weight: f64,
}

impl AliasTable {
    /// Builds the table from nonnegative, finite weights, at least one positive.
    pub fn new(weights: &[f64]) -> Result<Self> {
        let m = weights.len();
        if m == 0 {
            return Err(invalid("alias table needs at least one weight"));
        }
        if m > u32::MAX as usize {
            return Err(invalid("too many weights for an alias table"));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(invalid(format!("sampling weight {w} is not a finite nonnegative number")));
        }
        let total = weights.iter().copied().collect::<CompensatedSum>().value();
        if total <= 0.0 {
            return Err(Error::ZeroWeights);
        }

        let scale = m as f64 / total;
        let mut scaled: Vec<f64> = weights.iter().map(|w| w * scale).collect();
        let mut threshold = vec![1.0; m];
        let mut alias: Vec<u32> = (0..m as u32).collect();
        let (mut small, mut large): (Vec<u32>, Vec<u32>) =
            (0..m as u32).partition(|&i| scaled[i as usize] < 1.0);

        while let (Some(&s), Some(&g)) = (small.last(), large.last()) {
            small.pop();
            let (si, gi) = (s as usize, g as usize);
            threshold[si] = scaled[si];
            alias[si] = g;
            // (p_g + p_s) − 1 loses less precision than p_g − (1 − p_s)
            scaled[gi] = (scaled[gi] + scaled[si]) - 1.0;
            if scaled[gi] < 1.0 {
                large.pop();
                small.push(g);
            }
        }
        // Leftovers on either list are 1 up to rounding.
        for i in small.into_iter().chain(large) {
            threshold[i as usize] = 1.0;
            alias[i as usize] = i;
        }

        Ok(AliasTable { threshold, alias, total_weight: total })
    }

    pub fn len(&self) -> usize {
        self.threshold.len()
    }

    pub fn is_empty(&self) -> bool {
        self.threshold.is_empty()
    }

    /// Sum of the input weights.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Draws an index with probability `weight[i] / total`, from exactly one 64-bit word.
    ///
    /// The high part of `word · m` selects the slot; the top 53 bits of the
    /// low part form the coin compared against the slot threshold.
    #[inline]
    pub fn sample(&self, rng: &mut InstrumentedRng) -> usize {
        let m = self.threshold.len() as u64;
        let word = rng.next_word();
        let slot = mul_high(word, m) as usize;
        let rem = word.wrapping_mul(m);
        let coin = (rem >> 11) as f64 * TWO_POW_M53;
        if coin < self.threshold[slot] {
            slot
        } else {
            self.alias[slot] as usize
        }
    }

    /// Probability mass the table assigns to each index, summed over slots.
    pub fn implied_probabilities(&self) -> Vec<f64> {
        let m = self.len() as f64;
        let mut mass = vec![0.0; self.len()];
        for (j, (&t, &a)) in self.threshold.iter().zip(&self.alias).enumerate() {
            mass[j] += t / m;
            mass[a as usize] += (1.0 - t) / m;
        }
        mass
    }

    pub fn slots(&self) -> impl Iterator<Item = (f64, usize)> + '_ {
        self.threshold.iter().zip(&self.alias).map(|(&t, &a)| (t, a as usize))
    }
}
