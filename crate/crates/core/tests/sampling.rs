mod common;

use common::*;
use dnfcount::formula::parse_dnf;
use dnfcount::sampling::{AliasTable, InstrumentedRng, UniformQ};
use proptest::prelude::*;

#[test]
fn uniform_q_passes_ks() {
    let mut rng = InstrumentedRng::new(2024);
    let n = 1_000_000;
    let mut xs: Vec<f64> = (0..n).map(|_| rng.uniform_q().value()).collect();
    xs.sort_by(f64::total_cmp);
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - x).abs()))
        .fold(0.0, f64::max);
    assert!(d < ks_critical_1pct(n), "KS statistic {d}");
    assert!(xs.iter().all(|&x| x > 0.0 && x <= 1.0));
}

#[test]
fn floor_inverse_matches_exact_division() {
    let mut rng = InstrumentedRng::new(5);
    for _ in 0..100_000 {
        let u = rng.next_word();
        let q = UniformQ::from_word(u);
        let exact = (1u128 << 64) / (u as u128 + 1);
        assert_eq!(q.floor_inverse(u64::MAX) as u128, exact.min(u64::MAX as u128));
        assert_eq!(q.floor_inverse(9), exact.min(9) as u64);
    }
}

#[test]
fn alias_two_weights_frequencies() {
    let t = AliasTable::new(&[1.0, 3.0]).unwrap();
    let mut rng = InstrumentedRng::new(11);
    let n = 100_000u64;
    let ones = (0..n).filter(|_| t.sample(&mut rng) == 1).count() as u64;
    assert!(within_5_sigma(ones, n, 0.75));
    assert!(within_5_sigma(n - ones, n, 0.25));
}

#[test]
fn alias_uniform_chi_square() {
    let t = AliasTable::new(&[1.0; 8]).unwrap();
    let mut rng = InstrumentedRng::new(12);
    let n = 100_000;
    let mut counts = [0u64; 8];
    for _ in 0..n {
        counts[t.sample(&mut rng)] += 1;
    }
    let stat = chi2_stat(&counts, &[n as f64 / 8.0; 8]);
    assert!(stat < chi2_critical(7, 0.01), "chi-square {stat}");
}

#[test]
fn alias_follows_clause_weights_of_parsed_formula() {
    let f = parse_dnf("p dnf 6 5\n1 2 0\n-3 0\n2 4 -5 6 0\n1 -6 3 0\n5 0\n").unwrap();
    let w: Vec<f64> = (0..5).map(|i| f.clause_weight(i)).collect();
    let total: f64 = w.iter().sum();
    let t = AliasTable::new(&w).unwrap();
    let mut rng = InstrumentedRng::new(13);
    let n = 100_000u64;
    let mut counts = [0u64; 5];
    for _ in 0..n {
        counts[t.sample(&mut rng)] += 1;
    }
    for (c, wi) in counts.iter().zip(&w) {
        assert!(within_5_sigma(*c, n, wi / total), "{counts:?}");
    }
}

#[test]
fn bit_costs_follow_cost_model() {
    let mut rng = InstrumentedRng::new(1);
    let t = AliasTable::new(&[0.2, 0.5, 0.3]).unwrap();
    let mut expected = 0;
    for i in 0..10_000u64 {
        match i % 6 {
            0 => {
                rng.next_bit();
                expected += 1;
            }
            1 => {
                rng.bernoulli(0.5);
                expected += 1;
            }
            2 => {
                rng.bernoulli(0.3);
                expected += 64;
            }
            3 => {
                rng.uniform_q();
                expected += 64;
            }
            4 => {
                rng.uniform_index(17);
                expected += 64;
            }
            _ => {
                t.sample(&mut rng);
                expected += 64;
            }
        }
        assert_eq!(rng.bits_consumed(), expected);
    }
}

proptest! {
    #[test]
    fn alias_slots_reconstruct_probabilities(weights in prop::collection::vec(0.0f64..10.0, 1..=16)) {
        prop_assume!(weights.iter().any(|&w| w > 0.0));
        let t = AliasTable::new(&weights).unwrap();
        let total: f64 = weights.iter().sum();
        // Brute-force mass: each slot holds 1/m, split between itself and its alias.
        let m = weights.len() as f64;
        let mut mass = vec![0.0f64; weights.len()];
        for (i, (threshold, alias)) in t.slots().enumerate() {
            mass[i] += threshold / m;
            mass[alias] += (1.0 - threshold) / m;
        }
        for (got, w) in mass.iter().zip(&weights) {
            prop_assert!((got - w / total).abs() <= 1e-12, "{got} vs {}", w / total);
        }
        prop_assert!(((t.total_weight() - total) / total).abs() <= 1e-12);
    }

    #[test]
    fn draw_sequence_is_pure_function_of_seed(seed in any::<u64>(), ops in prop::collection::vec(0u8..4, 1..200)) {
        let run = || {
            let mut rng = InstrumentedRng::new(seed);
            let out: Vec<u64> = ops.iter().map(|op| match op {
                0 => rng.next_bit() as u64,
                1 => rng.next_word(),
                2 => rng.bernoulli(0.3) as u64,
                _ => rng.uniform_index(1000) as u64,
            }).collect();
            (out, rng.bits_consumed())
        };
        prop_assert_eq!(run(), run());
    }
}
