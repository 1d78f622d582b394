mod common;

use common::*;
use dnfcount::baselines::*;
use dnfcount::engine::{estimate_main, MainConfig};
use dnfcount::formula::{generate_benchmark, BenchmarkParams};
use dnfcount::stats::binomial_slack;
use dnfcount::{estimate, Algorithm, Formula, RunParams, Weights};

fn two_units() -> Formula {
    Formula::from_dimacs_clauses(2, &[&[1], &[2]]).unwrap()
}

#[test]
fn pac_on_two_unit_clauses() {
    let f = two_units();
    let mu = exact_count(&f, DEFAULT_MAX_VARS).unwrap().mu;
    assert_eq!(mu, 0.75);
    let bound = 0.05 + binomial_slack(0.05, 400);
    for algo in Algorithm::ESTIMATORS {
        let failures = (0..400u64)
            .filter(|&seed| {
                let est = estimate(&f, algo, &RunParams::new(0.1, 0.05, seed)).unwrap();
                (est.mu_hat - mu).abs() > 0.1 * mu
            })
            .count();
        assert!(failures as f64 / 400.0 <= bound, "{algo}: {failures} failures");
    }
}

#[test]
fn klm_and_lklm_trial_counts_match_in_distribution() {
    let f = two_units();
    let runs = 10_000u64;
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for seed in 0..runs {
        let x = estimate_lklm(&f, 0.2, 0.1, seed).unwrap();
        let y = estimate_klm(&f, 0.2, 0.1, seed + runs).unwrap();
        assert!(x.trials <= x.successes && y.trials <= y.successes);
        a.push(x.trials as f64);
        b.push(y.trials as f64);
    }
    let d = ks2_stat(&mut a, &mut b);
    assert!(d < ks2_critical_1pct(runs as usize, runs as usize), "KS statistic {d}");
}

#[test]
fn lklm_counts_one_success_per_step() {
    let f = generate_benchmark(&BenchmarkParams::accuracy(12, 12), 5).unwrap();
    let est = estimate_lklm(&f, 0.2, 0.1, 3).unwrap();
    assert_eq!(est.steps, est.successes);
    assert!(est.successes >= est.target);
    assert!(est.trials <= est.successes);
    // Alias draw per trial, clause index per step, one bit per lazily sampled variable.
    assert_eq!(est.bits, 64 * est.trials + 64 * est.successes + est.literals_sampled);
}

#[test]
fn klm_bit_cost_unweighted_and_weighted() {
    let f = generate_benchmark(&BenchmarkParams::accuracy(10, 10), 2).unwrap();
    let est = estimate_klm(&f, 0.3, 0.2, 1).unwrap();
    assert_eq!(est.bits, 64 * est.trials + 10 * est.trials + 64 * est.successes);

    let w = Weights::new((0..10).map(|i| 0.12 + 0.05 * i as f64).collect()).unwrap();
    let g = f.with_weights(w).unwrap();
    let est = estimate_klm(&g, 0.3, 0.2, 1).unwrap();
    assert_eq!(est.bits, 64 * est.trials + 64 * 10 * est.trials + 64 * est.successes);
}

#[test]
fn main_bit_cost_breakdown() {
    let f = generate_benchmark(&BenchmarkParams::accuracy(12, 15), 9).unwrap();
    let cfg = MainConfig::new(0.2, 0.1, 4);
    let est = estimate_main(&f, &cfg).unwrap();
    let pi = dnfcount::engine::blend_permutation(
        &f,
        cfg.beta,
        dnfcount::sampling::derive_seed(4, 1),
        &dnfcount::engine::width_heuristic(&f),
    )
    .unwrap();
    // Permutation bits, then alias draw and Q per trial, one bit per sampled variable.
    assert_eq!(est.bits, pi.bits() + 128 * est.trials + est.literals_sampled);
}

#[test]
fn exact_matches_naive_enumeration() {
    for seed in 0..20 {
        let f = generate_benchmark(&BenchmarkParams::accuracy(9, 7), seed).unwrap();
        let rho: Vec<f64> = (0..9).map(|i| 0.2 + 0.07 * i as f64).collect();
        let f = f.with_weights(Weights::new(rho.clone()).unwrap()).unwrap();
        let (mut mu, mut count) = (0.0, 0u64);
        for a in 0..1u32 << 9 {
            let nu: Vec<bool> = (0..9).map(|v| a >> v & 1 == 1).collect();
            if f.is_satisfied_by(&nu) {
                count += 1;
                mu += nu.iter().zip(&rho).map(|(&b, &r)| if b { r } else { 1.0 - r }).product::<f64>();
            }
        }
        let r = exact_count(&f, DEFAULT_MAX_VARS).unwrap();
        assert_eq!(r.model_count, count);
        assert!(((r.mu - mu) / mu).abs() < 1e-12);
        let p = coverage_expectation(&f, DEFAULT_MAX_VARS).unwrap();
        assert!(((p - r.p) / r.p).abs() < 1e-12);
    }
}

#[test]
fn extreme_weights_rejected_by_all_estimators() {
    let f = two_units().with_weights(Weights::new(vec![0.0, 0.5]).unwrap()).unwrap();
    for algo in Algorithm::ESTIMATORS {
        assert!(matches!(estimate(&f, algo, &RunParams::new(0.1, 0.1, 0)), Err(dnfcount::Error::InvalidFormula(_))));
    }
    assert!(exact_count(&f, DEFAULT_MAX_VARS).is_ok());
}
