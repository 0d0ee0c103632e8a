use batchrng::stats::{ks_statistic, KS_MIN_N};
use batchrng::{BatchRng, Error};
use proptest::prelude::*;

fn uniform_cdf(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Direct definition: sup over the sample points of |F_n - F| on both sides.
fn brute_force_d(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = samples.len() as f64;
    samples
        .iter()
        .map(|&x| {
            let le = samples.iter().filter(|&&y| y <= x).count() as f64 / n;
            let lt = samples.iter().filter(|&&y| y < x).count() as f64 / n;
            (le - cdf(x)).abs().max((cdf(x) - lt).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn engine_uniforms_pass() {
    let mut rng = BatchRng::with_seed(11);
    let xs: Vec<f64> = (0..100_000).map(|_| rng.get_uniform(0.0, 1.0).unwrap()).collect();
    let r = ks_statistic(&xs, uniform_cdf).unwrap();
    assert!(r.pass, "{r:?}");
    assert!((r.critical_1pct - 1.63 / 100_000f64.sqrt()).abs() < 1e-15);
}

#[test]
fn gross_mismatch_fails() {
    let mut rng = BatchRng::with_seed(12);
    let xs: Vec<f64> = (0..10_000).map(|_| rng.get_uniform(0.0, 1.0).unwrap()).collect();
    let r = ks_statistic(&xs, |x| uniform_cdf(x).powi(2)).unwrap();
    assert!(!r.pass);
    assert!((r.statistic - 0.25).abs() < 0.02, "{}", r.statistic);
}

#[test]
fn too_few_samples() {
    assert_eq!(
        ks_statistic(&[0.5; 10], uniform_cdf).unwrap_err(),
        Error::TooFewSamples { needed: KS_MIN_N, got: 10 }
    );
}

#[test]
fn nan_sample_fails() {
    let mut xs = vec![0.5; KS_MIN_N];
    xs[3] = f64::NAN;
    assert_eq!(ks_statistic(&xs, uniform_cdf).unwrap().statistic, 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn matches_brute_force(seed in any::<u64>(), skew in 0.5f64..2.0) {
        let mut rng = BatchRng::with_seed(seed);
        let xs: Vec<f64> = (0..KS_MIN_N).map(|_| rng.get_uniform(0.0, 1.0).unwrap()).collect();
        let cdf = |x: f64| uniform_cdf(x).powf(skew);
        let d = ks_statistic(&xs, cdf).unwrap().statistic;
        prop_assert!((d - brute_force_d(&xs, cdf)).abs() < 1e-12);
    }

    #[test]
    fn permutation_invariant(seed in any::<u64>(), rot in 0usize..KS_MIN_N) {
        let mut rng = BatchRng::with_seed(seed);
        let mut xs: Vec<f64> = (0..KS_MIN_N).map(|_| rng.get_gaussian(0.0, 1.0).unwrap()).collect();
        let cdf = batchrng::stats::normal_cdf;
        let d = ks_statistic(&xs, cdf).unwrap().statistic;
        xs.rotate_left(rot);
        xs.reverse();
        prop_assert_eq!(ks_statistic(&xs, cdf).unwrap().statistic, d);
    }
}
