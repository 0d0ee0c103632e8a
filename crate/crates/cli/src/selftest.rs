//! The statistical self-test behind `batchrng selftest`.

use batchrng::stats;
use batchrng::{BatchRng, BufferConfig, DistributionSpec, Result, StandardKind};

pub const DEFAULT_KS_N: usize = 100_000;
pub const DEFAULT_MOMENT_N: usize = 1_000_000;
/// Width of the Monte Carlo bands for moment checks.
pub const SIGMAS: f64 = 5.0;
pub const MIN_ACCEPTANCE: f64 = 0.95;
/// Family-wise level shared by all KS checks in one run.
pub const KS_FAMILY_LEVEL: f64 = 0.01;
/// Number of KS checks in [`run_all`].
pub const KS_CHECKS: usize = 27;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Three parameter points per scalar family.
pub fn parameter_grid() -> Vec<DistributionSpec> {
    use DistributionSpec as D;
    vec![
        D::Uniform { a: 0.0, b: 1.0 },
        D::Uniform { a: -2.0, b: 3.0 },
        D::Uniform { a: 10.0, b: 10.5 },
        D::Gaussian { mu: 0.0, sigma: 1.0 },
        D::Gaussian { mu: 5.0, sigma: 0.1 },
        D::Gaussian { mu: -3.0, sigma: 4.0 },
        D::Exponential { a: 0.0, beta: 1.0 },
        D::Exponential { a: 1.0, beta: 0.5 },
        D::Exponential { a: -2.0, beta: 3.0 },
        D::Laplace { a: 0.0, beta: 1.0 },
        D::Laplace { a: 1.0, beta: 0.5 },
        D::Laplace { a: -2.0, beta: 3.0 },
        D::Weibull { alpha: 1.0, a: 0.0, beta: 1.0 },
        D::Weibull { alpha: 2.0, a: 0.0, beta: 1.0 },
        D::Weibull { alpha: 0.5, a: 1.0, beta: 2.0 },
        D::Gamma { alpha: 0.5, a: 0.0, beta: 1.0 },
        D::Gamma { alpha: 2.5, a: 0.0, beta: 2.0 },
        D::Gamma { alpha: 10.0, a: 1.0, beta: 0.5 },
    ]
}

pub fn label(spec: &DistributionSpec) -> String {
    use DistributionSpec as D;
    match spec {
        D::Uniform { a, b } => format!("uniform({a}, {b})"),
        D::Gaussian { mu, sigma } => format!("gaussian({mu}, {sigma})"),
        D::Exponential { a, beta } => format!("exponential({a}, {beta})"),
        D::Laplace { a, beta } => format!("laplace({a}, {beta})"),
        D::Weibull { alpha, a, beta } => format!("weibull({alpha}, {a}, {beta})"),
        D::Gamma { alpha, a, beta } => format!("gamma({alpha}, {a}, {beta})"),
        D::Dirichlet { alphas } => format!("dirichlet{alphas:?}"),
    }
}

/// Seed for the `i`-th independent check. Neighbouring user seeds do not
/// share streams.
pub fn sub_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i)
}

/// `n` buffered one-at-a-time draws.
pub fn draw(rng: &mut BatchRng, spec: &DistributionSpec, n: usize) -> Result<Vec<f64>> {
    (0..n).map(|_| rng.sample(spec)).collect()
}

/// Asymptotic KS critical value times `sqrt(n)` at level `alpha`.
pub fn ks_coefficient(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

/// Per-check coefficient that keeps the chance of any false KS failure in a
/// run at [`KS_FAMILY_LEVEL`] (Sidak correction over [`KS_CHECKS`]).
pub fn selftest_ks_coefficient() -> f64 {
    let per_check = 1.0 - (1.0 - KS_FAMILY_LEVEL).powf(1.0 / KS_CHECKS as f64);
    ks_coefficient(per_check)
}

pub fn ks_check(name: String, samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<Check> {
    let r = stats::ks_statistic(samples, cdf)?;
    let critical = selftest_ks_coefficient() / (r.n as f64).sqrt();
    let detail = format!("D = {:.5}, critical {:.5} (1% single-test {:.5})", r.statistic, critical, r.critical_1pct);
    Ok(Check::new(name, r.statistic < critical, detail))
}

pub fn moment_check(name: String, samples: &[f64], expected: (f64, f64)) -> Result<Check> {
    let m = stats::moments(samples)?;
    let detail = format!(
        "mean {:.6} (want {:.6}), var {:.6} (want {:.6})",
        m.mean, expected.0, m.variance, expected.1
    );
    Ok(Check::new(name, m.within_bands(expected, SIGMAS), detail))
}

/// Only `kind` buffered, with length `len`.
pub fn only(kind: StandardKind, len: usize) -> BufferConfig {
    let mut c = BufferConfig::uniform(0);
    match kind {
        StandardKind::Uniform => c.uniform_len = len,
        StandardKind::Gaussian => c.gaussian_len = len,
        StandardKind::Exponential => c.exponential_len = len,
        StandardKind::LogUniform => c.log_uniform_len = len,
    }
    c
}

/// Whether `n` buffered draws of `spec` reproduce one batch call bit for bit.
/// The buffered side has only the stream it consumes enabled; the batch side
/// has every buffer disabled, so both read the engine from position zero.
pub fn stream_equivalent(seed: u64, spec: &DistributionSpec, len: usize, n: usize) -> Result<bool> {
    let kind = match spec {
        DistributionSpec::Uniform { .. } => StandardKind::Uniform,
        DistributionSpec::Gaussian { .. } => StandardKind::Gaussian,
        DistributionSpec::Exponential { .. } => StandardKind::Exponential,
        _ => return Err(batchrng::Error::Unsupported("stream equivalence beyond the reducible families")),
    };
    let mut buffered = BatchRng::new(seed, only(kind, len))?;
    let mut batch = BatchRng::new(seed, BufferConfig::uniform(0))?;
    let mut want = vec![0.0; n];
    batch.sample_batch(spec, &mut want)?;
    for &w in &want {
        if buffered.sample(spec)?.to_bits() != w.to_bits() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Fill count and cursor expected after `n` takes from a fresh buffer of
/// length `len`.
pub fn expected_accounting(n: usize, len: usize) -> (u64, usize) {
    if n == 0 {
        return (1, 0);
    }
    let fills = n.div_ceil(len);
    (fills as u64, n - (fills - 1) * len)
}

fn run_grid(seed: u64, ks_n: usize, moment_n: usize, checks: &mut Vec<Check>) -> Result<()> {
    for (i, spec) in parameter_grid().iter().enumerate() {
        let mut rng = BatchRng::with_seed(sub_seed(seed, i as u64));
        let xs = draw(&mut rng, spec, ks_n)?;
        checks.push(ks_check(format!("ks {}", label(spec)), &xs, stats::cdf(spec)?)?);
        let xs = draw(&mut rng, spec, moment_n)?;
        let expected = stats::theoretical_moments(spec)?;
        checks.push(moment_check(format!("moments {}", label(spec)), &xs, expected)?);
    }
    Ok(())
}

fn run_batch_path(seed: u64, ks_n: usize, checks: &mut Vec<Check>) -> Result<()> {
    for (i, spec) in parameter_grid().iter().enumerate().step_by(3) {
        let mut rng = BatchRng::new(sub_seed(seed, 100 + i as u64), BufferConfig::uniform(0))?;
        let mut xs = vec![0.0; ks_n];
        rng.sample_batch(spec, &mut xs)?;
        checks.push(ks_check(format!("batch ks {}", label(spec)), &xs, stats::cdf(spec)?)?);
    }
    Ok(())
}

fn run_gamma(seed: u64, ks_n: usize, acceptance_n: usize, checks: &mut Vec<Check>) -> Result<()> {
    let mut rng = BatchRng::with_seed(sub_seed(seed, 200));
    let xs = draw(&mut rng, &DistributionSpec::Gamma { alpha: 1.0, a: 0.0, beta: 1.0 }, ks_n)?;
    checks.push(ks_check("gamma(1, 0, 1) vs exponential(0, 1)".into(), &xs, |x| {
        if x <= 0.0 {
            0.0
        } else {
            -(-x).exp_m1()
        }
    })?);
    for alpha in [1.0, 2.0, 10.0] {
        rng.reset_gamma_counters();
        for _ in 0..acceptance_n {
            rng.get_gamma(alpha, 0.0, 1.0)?;
        }
        let rate = rng.gamma_counters().acceptance_rate();
        checks.push(Check::new(
            format!("gamma acceptance alpha = {alpha}"),
            rate > MIN_ACCEPTANCE,
            format!("rate {rate:.4}"),
        ));
    }
    Ok(())
}

fn run_log_uniform(seed: u64, ks_n: usize, checks: &mut Vec<Check>) -> Result<()> {
    let mut rng = BatchRng::with_seed(sub_seed(seed, 300));
    let xs = (0..ks_n).map(|_| rng.get_log_uniform()).collect::<Result<Vec<_>>>()?;
    checks.push(ks_check("ks log-uniform".into(), &xs, |x| x.min(0.0).exp())?);
    Ok(())
}

fn run_dirichlet(seed: u64, ks_n: usize, moment_n: usize, checks: &mut Vec<Check>) -> Result<()> {
    let mut rng = BatchRng::with_seed(sub_seed(seed, 400));
    let mut v = [0.0; 2];
    let mut first = Vec::with_capacity(ks_n);
    let mut worst_sum: f64 = 0.0;
    for _ in 0..ks_n {
        rng.get_dirichlet(&[1.0, 1.0], &mut v)?;
        first.push(v[0]);
        worst_sum = worst_sum.max((v[0] + v[1] - 1.0).abs());
    }
    checks.push(ks_check("ks dirichlet(1, 1) first component".into(), &first, |x| x.clamp(0.0, 1.0))?);

    let alphas = [2.0, 3.0, 5.0];
    let total: f64 = alphas.iter().sum();
    let mut w = [0.0; 3];
    let mut cols: Vec<Vec<f64>> = (0..3).map(|_| Vec::with_capacity(moment_n)).collect();
    let mut in_simplex = true;
    for _ in 0..moment_n {
        rng.get_dirichlet(&alphas, &mut w)?;
        worst_sum = worst_sum.max((w.iter().sum::<f64>() - 1.0).abs());
        in_simplex &= w.iter().all(|&c| (0.0..=1.0).contains(&c));
        for (col, &c) in cols.iter_mut().zip(&w) {
            col.push(c);
        }
    }
    for (k, (col, &a)) in cols.iter().zip(&alphas).enumerate() {
        let mean = a / total;
        let var = a * (total - a) / (total * total * (total + 1.0));
        checks.push(moment_check(format!("moments dirichlet(2, 3, 5) component {k}"), col, (mean, var))?);
    }
    checks.push(Check::new(
        "dirichlet components on the simplex",
        in_simplex && worst_sum <= 1e-12,
        format!("max |sum - 1| = {worst_sum:.2e}"),
    ));
    Ok(())
}

fn run_streams(seed: u64, checks: &mut Vec<Check>) -> Result<()> {
    let specs = [
        DistributionSpec::Uniform { a: -2.0, b: 3.0 },
        DistributionSpec::Exponential { a: 1.0, beta: 0.5 },
        DistributionSpec::Gaussian { mu: 0.0, sigma: 1.0 },
    ];
    for spec in &specs {
        for len in [2, 10, 1000] {
            let ok = stream_equivalent(sub_seed(seed, 500), spec, len, 10_000)?;
            checks.push(Check::new(
                format!("stream {} buffer {len}", label(spec)),
                ok,
                if ok { "bit-identical" } else { "streams differ" },
            ));
        }
    }
    Ok(())
}

fn run_accounting(seed: u64, checks: &mut Vec<Check>) -> Result<()> {
    for len in [1usize, 3, 64, 1000] {
        for n in [0usize, 1, len, len + 1, 5 * len + 2] {
            let mut rng = BatchRng::new(sub_seed(seed, 600), only(StandardKind::Uniform, len))?;
            for _ in 0..n {
                rng.get_uniform(0.0, 1.0)?;
            }
            let buf = rng.buffer(StandardKind::Uniform);
            let got = (buf.fills(), buf.cursor());
            let want = expected_accounting(n, len);
            checks.push(Check::new(
                format!("accounting buffer {len}, {n} takes"),
                got == want,
                format!("fills {} cursor {} (want {} and {})", got.0, got.1, want.0, want.1),
            ));
        }
    }
    Ok(())
}

/// Every check, in a fixed order. Errors only on sample sizes too small for
/// the tests.
pub fn run_all(seed: u64, ks_n: usize, moment_n: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    run_grid(seed, ks_n, moment_n, &mut checks)?;
    run_batch_path(seed, ks_n, &mut checks)?;
    run_log_uniform(seed, ks_n, &mut checks)?;
    run_gamma(seed, ks_n, moment_n, &mut checks)?;
    run_dirichlet(seed, ks_n, moment_n, &mut checks)?;
    run_streams(seed, &mut checks)?;
    run_accounting(seed, &mut checks)?;
    Ok(checks)
}
