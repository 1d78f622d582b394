#![allow(dead_code)]

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Upper-tail critical value of χ² with `df` degrees of freedom at level `alpha`.
pub fn chi2_critical(df: usize, alpha: f64) -> f64 {
    ChiSquared::new(df as f64).unwrap().inverse_cdf(1.0 - alpha)
}

pub fn chi2_stat(observed: &[u64], expected: &[f64]) -> f64 {
    observed.iter().zip(expected).map(|(&o, &e)| (o as f64 - e).powi(2) / e).sum()
}

/// Asymptotic one-sample KS critical value at 1%.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

/// Asymptotic two-sample KS critical value at 1%.
pub fn ks2_critical_1pct(n: usize, m: usize) -> f64 {
    1.6276 * ((n + m) as f64 / (n * m) as f64).sqrt()
}

/// Two-sample KS statistic.
pub fn ks2_stat(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

/// `|rate − p| ≤ 5σ` for a binomial proportion.
pub fn within_5_sigma(successes: u64, trials: u64, p: f64) -> bool {
    let rate = successes as f64 / trials as f64;
    (rate - p).abs() <= 5.0 * (p * (1.0 - p) / trials as f64).sqrt()
}

pub mod hp {
    //! 256-bit evaluation of the stopping-threshold inequality.
    use dashu_float::round::mode::HalfEven;
    use dashu_float::FBig;

    pub type F = FBig<HalfEven, 2>;
    const PREC: usize = 256;

    pub fn f(x: f64) -> F {
        F::try_from(x).unwrap().with_precision(PREC).value()
    }

    pub fn int(x: u64) -> F {
        F::from(x).with_precision(PREC).value()
    }

    /// `(ln a, ln b)` with `a = e^{ε/(1+ε)}/(1+ε)` and `b = e^{−ε/(1−ε)}/(1−ε)`.
    pub fn log_bases(eps: f64) -> (F, F) {
        let e = f(eps);
        let one = int(1);
        let ln_a = &e / (&one + &e) - e.ln_1p();
        let ln_b = -(&e / (&one - &e)) - (-&e).ln_1p();
        (ln_a, ln_b)
    }

    /// Does `a^t + b^t ≤ δ` hold?
    pub fn satisfies(eps: f64, delta: f64, t: u64) -> bool {
        let (ln_a, ln_b) = log_bases(eps);
        let t = int(t);
        let lhs = (&t * ln_a).exp() + (&t * ln_b).exp();
        lhs <= f(delta)
    }

    /// Smallest `T` satisfying the inequality, by incremental search from 1.
    pub fn threshold(eps: f64, delta: f64) -> u64 {
        let (ln_a, ln_b) = log_bases(eps);
        let (a, b) = (ln_a.exp(), ln_b.exp());
        let d = f(delta);
        let (mut pa, mut pb) = (a.clone(), b.clone());
        let mut t = 1;
        while &pa + &pb > d {
            pa = pa * &a;
            pb = pb * &b;
            t += 1;
        }
        t
    }

    /// Closed-form bracket `[ln(2/δ)/(−ln b), ln(2/δ)/(−ln a)]`.
    pub fn bracket(eps: f64, delta: f64) -> (F, F) {
        let (ln_a, ln_b) = log_bases(eps);
        let num = (int(2) / f(delta)).ln();
        (&num / -ln_b, num / -ln_a)
    }

    pub fn to_f64(x: &F) -> f64 {
        x.to_f64().value()
    }
}
