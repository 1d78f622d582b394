mod common;

use common::hp;
use dnfcount::baselines::{compute_t_lklm, lklm_threshold_real};
use dnfcount::engine::{chernoff_lower, compute_t_main, log_failure_bound, lower_tail_log_base, threshold_bracket};
use proptest::prelude::*;

#[test]
fn main_threshold_frozen_value() {
    // Fixed by the 256-bit incremental search in `common::hp`.
    assert_eq!(hp::threshold(0.05, 0.05), 2965);
    assert_eq!(compute_t_main(0.05, 0.05).unwrap(), 2965);
    let lo = (40f64.ln() / (0.95f64.ln() + 0.05 / 0.95)).ceil();
    let hi = (40f64.ln() / (1.05f64.ln() - 0.05 / 1.05)).ceil();
    assert!(lo <= 2965.0 && 2965.0 <= hi, "[{lo}, {hi}]");
}

#[test]
fn bracket_holds_at_half_quarter() {
    let t = compute_t_main(0.5, 0.25).unwrap();
    assert_eq!(t, hp::threshold(0.5, 0.25));
    let (lo, hi) = hp::bracket(0.5, 0.25);
    assert!(hp::to_f64(&lo) <= t as f64 && t as f64 <= hp::to_f64(&hi));
}

#[test]
fn library_bracket_matches_oracle() {
    for &(e, d) in &[(0.05, 0.05), (0.3, 0.01), (0.7, 0.6)] {
        let (lo, hi) = threshold_bracket(e, d);
        let (olo, ohi) = hp::bracket(e, d);
        assert!(((lo - hp::to_f64(&olo)) / lo).abs() < 1e-12);
        assert!(((hi - hp::to_f64(&ohi)) / hi).abs() < 1e-12);
    }
}

#[test]
fn lklm_threshold_frozen_value() {
    // 8(1+ε)·m·ln(3/δ) / ((1−ε²/8)·ε²) at 256 bits: 1376129.813…
    assert_eq!(compute_t_lklm(0.05, 0.05, 100).unwrap(), 1_376_130);
    assert!((lklm_threshold_real(0.05, 0.05, 100) - 1_376_129.813_473_336).abs() < 1e-6);
}

#[test]
fn thresholds_nonincreasing_on_grid() {
    let grid: Vec<f64> = (1..=12).map(|i| i as f64 * 0.07).collect();
    for &e in &grid {
        for w in grid.windows(2) {
            assert!(compute_t_main(e, w[1]).unwrap() <= compute_t_main(e, w[0]).unwrap());
            assert!(compute_t_main(w[1], e).unwrap() <= compute_t_main(w[0], e).unwrap());
            assert!(compute_t_lklm(e, w[1], 50).unwrap() <= compute_t_lklm(e, w[0], 50).unwrap());
            assert!(compute_t_lklm(w[1], e, 50).unwrap() <= compute_t_lklm(w[0], e, 50).unwrap());
        }
    }
}

#[test]
fn chernoff_identity_in_high_precision() {
    let (t, e) = (100.0, 0.1);
    let (_, ln_b) = hp::log_bases(e);
    let rhs = hp::to_f64(&(hp::int(100) * ln_b).exp());
    let lhs = chernoff_lower(t / (1.0 - e), t).unwrap();
    assert!(((lhs - rhs) / rhs).abs() < 1e-10, "{lhs} vs {rhs}");
    assert!(((lower_tail_log_base(e) * t).exp() - rhs).abs() / rhs < 1e-10);
}

#[test]
fn chernoff_nonincreasing_on_grid() {
    for yi in 1..=20 {
        let y = yi as f64 * 1.5;
        let vals: Vec<f64> = (0..100).map(|xi| chernoff_lower(y + xi as f64 * 0.25, y).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn threshold_is_minimal(e in 0.02f64..0.74, d in 0.01f64..0.74) {
        let t = compute_t_main(e, d).unwrap();
        prop_assert!(log_failure_bound(e, t) <= d.ln());
        prop_assert!(t == 1 || log_failure_bound(e, t - 1) > d.ln());
        prop_assert!(hp::satisfies(e, d, t));
        prop_assert!(t == 1 || !hp::satisfies(e, d, t - 1));
    }
}
