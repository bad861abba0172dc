//! Streaming moments, the regularized incomplete gamma function and the
//! chi-square / Kolmogorov–Smirnov statistics used by the goodness-of-fit checks.

use serde::Serialize;

/// Welford accumulator with pairwise merging.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct RunningStats {
    pub n: u64,
    pub mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. combination of two partial accumulators.
    pub fn merge(&self, other: &RunningStats) -> RunningStats {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        RunningStats { n, mean, m2 }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

const GAMMA_EPS: f64 = 1e-15;
const GAMMA_MAX_ITER: usize = 10_000;

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7, n = 9).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Regularized lower incomplete gamma `P(a, x)`.
///
/// Power series for `x < a + 1`, Lentz continued fraction for `Q` otherwise.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    assert!(a > 0.0, "gamma_p requires a > 0");
    if x <= 0.0 {
        return 0.0;
    }
    let log_prefactor = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..GAMMA_MAX_ITER {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * GAMMA_EPS {
                break;
            }
        }
        (sum.ln() + log_prefactor).exp().min(1.0)
    } else {
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..GAMMA_MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let step = d * c;
            h *= step;
            if (step - 1.0).abs() < GAMMA_EPS {
                break;
            }
        }
        (1.0 - (h.ln() + log_prefactor).exp()).max(0.0)
    }
}

pub fn chi_square_cdf(x: f64, dof: u32) -> f64 {
    gamma_p(0.5 * dof as f64, 0.5 * x)
}

/// Quantile of the chi-square law, solved by bisection on the CDF to 1e-10.
pub fn chi_square_quantile(prob: f64, dof: u32) -> f64 {
    assert!((0.0..1.0).contains(&prob) && dof > 0);
    let (mut lo, mut hi) = (0.0, dof as f64 + 10.0);
    while chi_square_cdf(hi, dof) < prob {
        hi *= 2.0;
    }
    while hi - lo > 1e-10 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if chi_square_cdf(mid, dof) < prob {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Pearson statistic `Σ (o − e)² / e` over cells with positive expectation.
pub fn chi_square_statistic(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .filter(|(_, &e)| e > 0.0)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum()
}

/// One-sample Kolmogorov–Smirnov distance of `samples` from a continuous CDF.
/// Sorts `samples` in place.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn welford_matches_two_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37 % 101) as f64).sin()).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;

        let mut whole = RunningStats::default();
        xs.iter().for_each(|&x| whole.push(x));
        assert!((whole.mean - mean).abs() < 1e-14);
        assert!((whole.variance() - var).abs() < 1e-13);

        let (mut a, mut b) = (RunningStats::default(), RunningStats::default());
        xs[..333].iter().for_each(|&x| a.push(x));
        xs[333..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(&b);
        assert_eq!(merged.n, 1000);
        assert!((merged.mean - mean).abs() < 1e-14);
        assert!((merged.variance() - var).abs() < 1e-13);
        assert_eq!(RunningStats::default().merge(&a), a);
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!(ln_gamma(1.0).abs() < 1e-14);
        assert!(ln_gamma(2.0).abs() < 1e-14);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn gamma_p_closed_forms() {
        // a = 1: P = 1 − e^{−x}
        for x in [0.1, 1.0, 3.0, 20.0] {
            assert!((gamma_p(1.0, x) - (1.0 - (-x).exp())).abs() < 1e-13);
        }
        // chi-square with 2 dof: CDF = 1 − e^{−x/2}
        assert!((chi_square_cdf(4.0, 2) - (1.0 - (-2.0f64).exp())).abs() < 1e-13);
    }

    #[test]
    fn chi_square_quantiles() {
        // standard table values
        assert!((chi_square_quantile(0.99, 1) - 6.634_896_6).abs() < 1e-6);
        assert!((chi_square_quantile(0.99, 10) - 23.209_251).abs() < 1e-5);
        assert!((chi_square_quantile(0.99, 39) - 62.428_121).abs() < 1e-5);
        assert!((chi_square_quantile(0.95, 39) - 54.572_228).abs() < 1e-5);
        let q = chi_square_quantile(0.99, 19);
        assert!((chi_square_cdf(q, 19) - 0.99).abs() < 1e-10);
    }

    #[test]
    fn ks_on_perfect_grid() {
        let mut xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        let d = ks_statistic(&mut xs, |x| x);
        assert!((d - 0.005).abs() < 1e-12);
    }

    #[test]
    fn chi_square_statistic_skips_empty_cells() {
        assert_eq!(chi_square_statistic(&[10, 0], &[10.0, 0.0]), 0.0);
        assert_eq!(chi_square_statistic(&[12, 8], &[10.0, 10.0]), 0.8);
    }
}
