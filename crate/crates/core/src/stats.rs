//! Sample moments, closed-form moments and CDFs, and the one-sample
//! Kolmogorov–Smirnov statistic.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sampler::DistributionSpec;

/// Minimum sample size for [`ks_statistic`]; the critical value is asymptotic.
pub const KS_MIN_N: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub n: usize,
    pub mean: f64,
    /// Unbiased, divisor `n - 1`.
    pub variance: f64,
    /// Fourth central moment, divisor `n`. Sizes the variance band.
    pub m4: f64,
}

impl MomentSummary {
    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    /// Whether mean and variance sit within `sigmas` Monte Carlo standard
    /// errors of `(mean, variance)`. The mean's error uses the true variance;
    /// the variance's error uses the sample fourth moment.
    pub fn within_bands(&self, expected: (f64, f64), sigmas: f64) -> bool {
        let (mean, variance) = expected;
        let n = self.n as f64;
        let mean_tol = sigmas * (variance / n).sqrt();
        let var_se = ((self.m4 - self.variance * self.variance).max(0.0) / n).sqrt();
        (self.mean - mean).abs() <= mean_tol && (self.variance - variance).abs() <= sigmas * var_se
    }
}

/// Two-pass mean and variance.
pub fn moments(samples: &[f64]) -> Result<MomentSummary> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let (mut s2, mut s4) = (0.0, 0.0);
    for &x in samples {
        let d = x - mean;
        let d2 = d * d;
        s2 += d2;
        s4 += d2 * d2;
    }
    Ok(MomentSummary {
        n,
        mean,
        variance: s2 / (n - 1) as f64,
        m4: s4 / n as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub n: usize,
    pub statistic: f64,
    /// `1.63 / sqrt(n)`.
    pub critical_1pct: f64,
    pub pass: bool,
}

/// One-sample KS statistic against `cdf`. A NaN sample or CDF value yields
/// `D = 1`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    let n = samples.len();
    if n < KS_MIN_N {
        return Err(Error::TooFewSamples { needed: KS_MIN_N, got: n });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        if f.is_nan() {
            d = 1.0;
            break;
        }
        let above = (i + 1) as f64 / nf - f;
        let below = f - i as f64 / nf;
        d = d.max(above).max(below);
    }
    let critical_1pct = 1.63 / nf.sqrt();
    Ok(KsResult {
        n,
        statistic: d,
        critical_1pct,
        pass: d < critical_1pct,
    })
}

/// `(mean, variance)` in closed form.
pub fn theoretical_moments(spec: &DistributionSpec) -> Result<(f64, f64)> {
    spec.validate()?;
    Ok(match *spec {
        DistributionSpec::Uniform { a, b } => ((a + b) / 2.0, (b - a) * (b - a) / 12.0),
        DistributionSpec::Gaussian { mu, sigma } => (mu, sigma * sigma),
        DistributionSpec::Exponential { a, beta } => (a + beta, beta * beta),
        DistributionSpec::Laplace { a, beta } => (a, 2.0 * beta * beta),
        DistributionSpec::Weibull { alpha, a, beta } => {
            let g1 = gamma(1.0 + 1.0 / alpha);
            let g2 = gamma(1.0 + 2.0 / alpha);
            (a + beta * g1, beta * beta * (g2 - g1 * g1))
        }
        DistributionSpec::Gamma { alpha, a, beta } => (a + alpha * beta, alpha * beta * beta),
        DistributionSpec::Dirichlet { .. } => return Err(Error::Unsupported("moments of a vector-valued family")),
    })
}

/// The CDF of a scalar family.
pub fn cdf(spec: &DistributionSpec) -> Result<Box<dyn Fn(f64) -> f64>> {
    spec.validate()?;
    Ok(match *spec {
        DistributionSpec::Uniform { a, b } => Box::new(move |x| ((x - a) / (b - a)).clamp(0.0, 1.0)),
        DistributionSpec::Gaussian { mu, sigma } => Box::new(move |x| {
            if sigma == 0.0 {
                if x < mu {
                    0.0
                } else {
                    1.0
                }
            } else {
                normal_cdf((x - mu) / sigma)
            }
        }),
        DistributionSpec::Exponential { a, beta } => {
            Box::new(move |x| if x <= a { 0.0 } else { -(-(x - a) / beta).exp_m1() })
        }
        DistributionSpec::Laplace { a, beta } => Box::new(move |x| {
            let t = (x - a) / beta;
            if t < 0.0 {
                0.5 * t.exp()
            } else {
                1.0 - 0.5 * (-t).exp()
            }
        }),
        DistributionSpec::Weibull { alpha, a, beta } => {
            Box::new(move |x| if x <= a { 0.0 } else { -(-((x - a) / beta).powf(alpha)).exp_m1() })
        }
        DistributionSpec::Gamma { alpha, a, beta } => {
            Box::new(move |x| if x <= a { 0.0 } else { regularized_gamma_p(alpha, (x - a) / beta) })
        }
        DistributionSpec::Dirichlet { .. } => return Err(Error::Unsupported("CDF of a vector-valued family")),
    })
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
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

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (i, c)| acc + c / (x + (i + 1) as f64))
}

/// Γ(x) by the Lanczos approximation, with reflection below 1/2.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let t = x + LANCZOS_G + 0.5;
        // split so t^(x + 1/2) does not overflow before e^-t pulls it back
        let half = t.powf(0.5 * (x + 0.5));
        (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(x)
    }
}

/// ln Γ(x) for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)
    } else {
        let x = x - 1.0;
        let t = x + LANCZOS_G + 0.5;
        0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + lanczos_sum(x).ln()
    }
}

/// Regularized lower incomplete gamma `P(a, x)`: series below `a + 1`,
/// Lentz continued fraction for the complement above.
pub fn regularized_gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    let log_prefix = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..10_000 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        (sum.ln() + log_prefix).exp().min(1.0)
    } else {
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let step = d * c;
            h *= step;
            if (step - 1.0).abs() < 1e-16 {
                break;
            }
        }
        (1.0 - (h.ln() + log_prefix).exp()).max(0.0)
    }
}

/// Standard normal CDF via `P(1/2, z^2/2)`.
pub fn normal_cdf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    let p = regularized_gamma_p(0.5, 0.5 * z * z);
    if z < 0.0 {
        0.5 * (1.0 - p)
    } else {
        0.5 * (1.0 + p)
    }
}
