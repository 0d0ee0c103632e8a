use batchrng::engine::{box_muller, exponential_from_uniform};
use batchrng::stats::{self, ks_statistic, moments};
use batchrng::{BatchRng, BufferConfig, DistributionSpec as D, Engine};
use statrs::distribution::{Beta, ContinuousCDF, Exp, Gamma, Laplace, Normal, Uniform, Weibull};
use statrs::statistics::Distribution;

const KS_N: usize = 100_000;
const MOMENT_N: usize = 1_000_000;

/// Independent CDF, mean and variance for each spec.
fn oracle(spec: &D) -> (Box<dyn Fn(f64) -> f64>, f64, f64) {
    match *spec {
        D::Uniform { a, b } => {
            let d = Uniform::new(a, b).unwrap();
            (Box::new(move |x| d.cdf(x)), d.mean().unwrap(), d.variance().unwrap())
        }
        D::Gaussian { mu, sigma } => {
            let d = Normal::new(mu, sigma).unwrap();
            (Box::new(move |x| d.cdf(x)), d.mean().unwrap(), d.variance().unwrap())
        }
        D::Exponential { a, beta } => {
            let d = Exp::new(1.0 / beta).unwrap();
            (Box::new(move |x| d.cdf(x - a)), a + d.mean().unwrap(), d.variance().unwrap())
        }
        D::Laplace { a, beta } => {
            let d = Laplace::new(a, beta).unwrap();
            (Box::new(move |x| d.cdf(x)), d.mean().unwrap(), d.variance().unwrap())
        }
        D::Weibull { alpha, a, beta } => {
            let d = Weibull::new(alpha, beta).unwrap();
            (Box::new(move |x| d.cdf(x - a)), a + d.mean().unwrap(), d.variance().unwrap())
        }
        D::Gamma { alpha, a, beta } => {
            let d = Gamma::new(alpha, 1.0 / beta).unwrap();
            (Box::new(move |x| d.cdf(x - a)), a + d.mean().unwrap(), d.variance().unwrap())
        }
        D::Dirichlet { .. } => unreachable!(),
    }
}

fn grid() -> Vec<D> {
    vec![
        D::Uniform { a: 0.0, b: 1.0 },
        D::Uniform { a: -2.0, b: 3.0 },
        D::Uniform { a: 1e6, b: 1e6 + 1.0 },
        D::Gaussian { mu: 0.0, sigma: 1.0 },
        D::Gaussian { mu: -7.0, sigma: 0.01 },
        D::Gaussian { mu: 2.0, sigma: 30.0 },
        D::Exponential { a: 0.0, beta: 1.0 },
        D::Exponential { a: 1.0, beta: 0.5 },
        D::Exponential { a: -5.0, beta: 10.0 },
        D::Laplace { a: 0.0, beta: 1.0 },
        D::Laplace { a: 3.0, beta: 0.2 },
        D::Laplace { a: -1.0, beta: 4.0 },
        D::Weibull { alpha: 1.0, a: 0.0, beta: 1.0 },
        D::Weibull { alpha: 3.5, a: 0.0, beta: 2.0 },
        D::Weibull { alpha: 0.7, a: -1.0, beta: 0.5 },
        D::Gamma { alpha: 0.3, a: 0.0, beta: 1.0 },
        D::Gamma { alpha: 1.5, a: 2.0, beta: 3.0 },
        D::Gamma { alpha: 40.0, a: 0.0, beta: 0.1 },
    ]
}

#[test]
fn buffered_draws_fit_every_family() {
    let mut failures = Vec::new();
    for (i, spec) in grid().iter().enumerate() {
        let (cdf, mean, var) = oracle(spec);
        let mut rng = BatchRng::with_seed(1000 + i as u64);
        let xs: Vec<f64> = (0..KS_N).map(|_| rng.sample(spec).unwrap()).collect();
        let ks = ks_statistic(&xs, &cdf).unwrap();
        if !ks.pass {
            failures.push(format!("{spec:?}: D = {}", ks.statistic));
        }
        let xs: Vec<f64> = (0..MOMENT_N).map(|_| rng.sample(spec).unwrap()).collect();
        let m = moments(&xs).unwrap();
        if !m.within_bands((mean, var), 5.0) {
            failures.push(format!("{spec:?}: {m:?} vs ({mean}, {var})"));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn batch_draws_fit_every_family() {
    let mut failures = Vec::new();
    for (i, spec) in grid().iter().enumerate() {
        let (cdf, _, _) = oracle(spec);
        let mut rng = BatchRng::new(2000 + i as u64, BufferConfig::uniform(0)).unwrap();
        let mut xs = vec![0.0; KS_N];
        rng.sample_batch(spec, &mut xs).unwrap();
        let ks = ks_statistic(&xs, &cdf).unwrap();
        if !ks.pass {
            failures.push(format!("{spec:?}: D = {}", ks.statistic));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn closed_form_moments_agree_with_statrs() {
    for spec in grid() {
        let (_, mean, var) = oracle(&spec);
        let (m, v) = stats::theoretical_moments(&spec).unwrap();
        assert!((m - mean).abs() <= 1e-12 * mean.abs().max(1.0), "{spec:?}");
        assert!((v - var).abs() <= 1e-10 * var, "{spec:?}");
    }
}

#[test]
fn library_cdf_agrees_with_statrs() {
    for spec in grid() {
        let (want, mean, var) = oracle(&spec);
        let got = stats::cdf(&spec).unwrap();
        let sd = var.sqrt();
        for k in -40..=40 {
            let x = mean + sd * k as f64 / 8.0;
            assert!((got(x) - want(x)).abs() < 1e-9, "{spec:?} at {x}");
        }
    }
}

#[test]
fn gamma_shape_one_is_exponential() {
    let mut rng = BatchRng::with_seed(77);
    let xs: Vec<f64> = (0..KS_N).map(|_| rng.get_gamma(1.0, 0.0, 1.0).unwrap()).collect();
    let exp = Exp::new(1.0).unwrap();
    assert!(ks_statistic(&xs, |x| exp.cdf(x)).unwrap().pass);
}

#[test]
fn dirichlet_marginals_are_beta() {
    let alphas = [0.4, 2.0, 5.0];
    let total: f64 = alphas.iter().sum();
    let mut rng = BatchRng::with_seed(78);
    let mut out = [0.0; 3];
    let mut cols: Vec<Vec<f64>> = (0..3).map(|_| Vec::with_capacity(KS_N)).collect();
    for _ in 0..KS_N {
        rng.get_dirichlet(&alphas, &mut out).unwrap();
        for (c, &x) in cols.iter_mut().zip(&out) {
            c.push(x);
        }
    }
    for (col, &a) in cols.iter().zip(&alphas) {
        let beta = Beta::new(a, total - a).unwrap();
        let ks = ks_statistic(col, |x| beta.cdf(x)).unwrap();
        assert!(ks.pass, "alpha {a}: {ks:?}");
    }
}

#[test]
fn log_uniform_fits() {
    let mut rng = BatchRng::with_seed(79);
    let xs: Vec<f64> = (0..KS_N).map(|_| rng.get_log_uniform().unwrap()).collect();
    let exp = Exp::new(1.0).unwrap();
    assert!(ks_statistic(&xs, |x| 1.0 - exp.cdf(-x)).unwrap().pass);
}

#[test]
fn corrupted_exponential_transform_is_caught() {
    let mut engine = Engine::new(5);
    let exp = Exp::new(1.0).unwrap();
    let good: Vec<f64> = (0..KS_N).map(|_| exponential_from_uniform(engine.next_uniform())).collect();
    assert!(ks_statistic(&good, |x| exp.cdf(x)).unwrap().pass);
    // log argument squeezed into [0.5, 1)
    let bad: Vec<f64> = (0..KS_N).map(|_| -(0.5 + 0.5 * engine.next_uniform()).ln()).collect();
    assert!(!ks_statistic(&bad, |x| exp.cdf(x)).unwrap().pass);
}

#[test]
fn corrupted_box_muller_is_caught() {
    let mut engine = Engine::new(6);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let bad: Vec<f64> = (0..KS_N)
        .map(|_| {
            let (u1, u2) = (engine.next_uniform(), engine.next_uniform());
            // radius missing the factor 2
            box_muller(u1, u2).0 / std::f64::consts::SQRT_2
        })
        .collect();
    assert!(!ks_statistic(&bad, |x| normal.cdf(x)).unwrap().pass);
}
