//! Small numeric helpers shared across modules.

/// Neumaier (improved Kahan–Babuška) compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial sum into this one, keeping both compensation terms.
    pub fn merge(&mut self, other: CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// `floor(a * b / 2^64)`: maps a uniform 64-bit word onto `0..b`.
#[inline]
pub(crate) fn mul_high(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) >> 64) as u64
}

/// Log-sum-exp of two terms.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    let lo = a.min(b);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..1000 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-13).abs() < 1e-25);
    }

    #[test]
    fn mul_high_bounds() {
        assert_eq!(mul_high(u64::MAX, 10), 9);
        assert_eq!(mul_high(0, 10), 0);
        assert_eq!(mul_high(1 << 63, 4), 2);
    }

    #[test]
    fn log_add_exp_matches_direct() {
        let v = log_add_exp(0.5f64.ln(), 0.25f64.ln());
        assert!((v - 0.75f64.ln()).abs() < 1e-15);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, f64::NEG_INFINITY), f64::NEG_INFINITY);
    }
}
