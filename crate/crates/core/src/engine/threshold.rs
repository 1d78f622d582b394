//! The success-count threshold of the adaptive stopping rule and the Chernoff
//! lower-tail function used to justify it.

use crate::error::{invalid, Result};
use crate::numeric::log_add_exp;

pub(crate) fn check_eps_delta(epsilon: f64, delta: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid(format!("epsilon = {epsilon} must lie in (0, 1)")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta = {delta} must lie in (0, 1)")));
    }
    Ok(())
}

/// `ln(e^{ε/(1+ε)} / (1+ε))`: per-success log-rate of the upper-tail bound.
pub fn upper_tail_log_base(epsilon: f64) -> f64 {
    epsilon / (1.0 + epsilon) - epsilon.ln_1p()
}

/// `ln(e^{−ε/(1−ε)} / (1−ε))`: per-success log-rate of the lower-tail bound.
pub fn lower_tail_log_base(epsilon: f64) -> f64 {
    -epsilon / (1.0 - epsilon) - (-epsilon).ln_1p()
}

/// `ln` of the two-sided failure bound after `t` successes.
pub fn log_failure_bound(epsilon: f64, t: u64) -> f64 {
    let t = t as f64;
    log_add_exp(t * upper_tail_log_base(epsilon), t * lower_tail_log_base(epsilon))
}

/// Closed-form bracket `[lower, upper]` (real-valued) around the threshold.
pub fn threshold_bracket(epsilon: f64, delta: f64) -> (f64, f64) {
    let num = (2.0 / delta).ln();
    (num / -lower_tail_log_base(epsilon), num / -upper_tail_log_base(epsilon))
}

/// Smallest `T` with
/// `(e^{ε/(1+ε)}/(1+ε))^T + (e^{−ε/(1−ε)}/(1−ε))^T ≤ δ`.
///
/// Both terms decrease in `T`, so a binary search over the closed-form
/// bracket finds the minimum; the test is done in log space.
pub fn compute_t_main(epsilon: f64, delta: f64) -> Result<u64> {
    check_eps_delta(epsilon, delta)?;
    if epsilon >= 0.75 || delta >= 0.75 {
        log::warn!("epsilon = {epsilon}, delta = {delta}: accuracy guarantee only holds inside (0, 3/4)");
    }
    let ln_delta = delta.ln();
    let ok = |t: u64| log_failure_bound(epsilon, t) <= ln_delta;

    let (lower, upper) = threshold_bracket(epsilon, delta);
    let mut lo = (lower.floor() as u64).max(1);
    let mut hi = (upper.ceil() as u64).max(lo);
    // The bracket is exact in real arithmetic; widen it if rounding disagrees.
    while lo > 1 && ok(lo - 1) {
        lo /= 2;
    }
    while !ok(hi) {
        hi = hi.saturating_mul(2);
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// `ln F⁻(x, y) = (y − x) + y ln(x / y)`.
pub fn chernoff_lower_ln(x: f64, y: f64) -> Result<f64> {
    if !(y > 0.0 && y <= x) || !x.is_finite() {
        return Err(invalid(format!("Chernoff lower tail needs 0 < y ≤ x, got x = {x}, y = {y}")));
    }
    Ok((y - x) + y * (x / y).ln())
}

/// Chernoff lower-tail bound `F⁻(x, y) = e^{y−x} (x/y)^y` on the probability
/// that a sum of independent indicators with mean `x` is at most `y ≤ x`.
///
/// `F⁻(T/(1−ε), T)` equals the lower-tail term `(e^{−ε/(1−ε)}/(1−ε))^T` of
/// the stopping threshold.
pub fn chernoff_lower(x: f64, y: f64) -> Result<f64> {
    chernoff_lower_ln(x, y).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_domain() {
        assert!(compute_t_main(0.0, 0.1).is_err());
        assert!(compute_t_main(1.0, 0.1).is_err());
        assert!(compute_t_main(0.1, 0.0).is_err());
        assert!(compute_t_main(0.1, 1.0).is_err());
        assert!(compute_t_main(f64::NAN, 0.1).is_err());
    }

    #[test]
    fn minimality_and_feasibility() {
        for &(e, d) in &[(0.05, 0.05), (0.1, 0.05), (0.5, 0.25), (0.01, 0.001), (0.7, 0.7)] {
            let t = compute_t_main(e, d).unwrap();
            assert!(log_failure_bound(e, t) <= d.ln());
            if t > 1 {
                assert!(log_failure_bound(e, t - 1) > d.ln());
            }
            let (lo, hi) = threshold_bracket(e, d);
            assert!(lo <= t as f64 && t as f64 <= hi.ceil(), "{e} {d}: {lo} {t} {hi}");
        }
    }

    #[test]
    fn chernoff_identity_at_equal_arguments() {
        assert_eq!(chernoff_lower(3.0, 3.0).unwrap(), 1.0);
        assert!(chernoff_lower(1.0, 2.0).is_err());
        assert!(chernoff_lower(1.0, 0.0).is_err());
    }

    #[test]
    fn chernoff_matches_lower_tail_base() {
        let (t, e) = (100.0, 0.1);
        let lhs = chernoff_lower(t / (1.0 - e), t).unwrap();
        let rhs = (t * lower_tail_log_base(e)).exp();
        assert!(((lhs - rhs) / rhs).abs() < 1e-10);
    }

    #[test]
    fn chernoff_nonincreasing_in_x() {
        for y in [0.5, 1.0, 7.0, 40.0] {
            let mut prev = f64::INFINITY;
            for i in 0..200 {
                let x = y + i as f64 * 0.37;
                let v = chernoff_lower(x, y).unwrap();
                assert!(v <= prev);
                prev = v;
            }
        }
    }
}
