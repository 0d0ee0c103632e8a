use std::process::{Command, Output};

fn batchrng(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_batchrng"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn sample_is_deterministic() {
    let args = ["sample", "--dist", "uniform", "--a", "0", "--b", "1", "--n", "5", "--seed", "7"];
    let (a, b) = (batchrng(&args), batchrng(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 5);
}

#[test]
fn different_seeds_differ() {
    let a = batchrng(&["sample", "--dist", "gaussian", "--n", "3", "--seed", "1"]);
    let b = batchrng(&["sample", "--dist", "gaussian", "--n", "3", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn text_round_trips_exactly() {
    let text = batchrng(&["sample", "--dist", "laplace", "--a", "-1", "--beta", "0.3", "--n", "200"]);
    let bin = batchrng(&["sample", "--dist", "laplace", "--a", "-1", "--beta", "0.3", "--n", "200", "--format", "binary"]);
    let parsed: Vec<f64> = stdout(&text).lines().map(|l| l.parse().unwrap()).collect();
    let raw: Vec<f64> = bin
        .stdout
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    assert_eq!(raw.len(), 200);
    assert_eq!(parsed.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), raw.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
}

#[test]
fn seventeen_significant_digits() {
    let o = batchrng(&["sample", "--dist", "exponential", "--n", "4"]);
    for line in stdout(&o).lines() {
        let mantissa = line.split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17, "{line}");
    }
}

#[test]
fn gamma_mean_matches_alpha_beta() {
    let o = batchrng(&["sample", "--dist", "gamma", "--alpha", "2.5", "--beta", "2", "--n", "1000000", "--format", "binary"]);
    assert!(o.status.success());
    let xs: Vec<f64> = o.stdout.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    // sd of the mean is sqrt(alpha) beta / 1000 ~ 0.0032
    assert!((mean - 5.0).abs() < 0.02, "{mean}");
}

#[test]
fn equal_bounds_rejected() {
    let o = batchrng(&["sample", "--dist", "uniform", "--a", "1", "--b", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("a < b required"), "{}", stderr(&o));
}

#[test]
fn foreign_flag_is_usage_error() {
    let o = batchrng(&["sample", "--dist", "uniform", "--sigma", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = batchrng(&["sample", "--dist", "cauchy"]);
    assert_eq!(o.status.code(), Some(2));
    let o = batchrng(&["sample", "--dist", "dirichlet"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dirichlet_rows_sum_to_one() {
    let o = batchrng(&["sample", "--dist", "dirichlet", "--alphas", "0.5,1,4", "--n", "50"]);
    assert!(o.status.success());
    for line in stdout(&o).lines() {
        let parts: Vec<f64> = line.split(',').map(|p| p.parse().unwrap()).collect();
        assert_eq!(parts.len(), 3);
        assert!((parts.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn odd_buffer_len_rejected() {
    let o = batchrng(&["sample", "--dist", "gaussian", "--buffer-len", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn disabled_buffers_fail_oaat_sampling() {
    let o = batchrng(&["sample", "--dist", "weibull", "--alpha", "2", "--buffer-len", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("disabled"));
}

#[test]
fn bench_rejects_small_n() {
    let o = batchrng(&["bench", "--n", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("too small"));
}

#[test]
fn bench_markdown_table() {
    let o = batchrng(&["bench", "--n", "100000", "--format", "md"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("Speedup"));
    for f in ["Uniform", "Gaussian", "Exponential", "Laplace", "Weibull", "Gamma"] {
        assert_eq!(out.lines().filter(|l| l.starts_with(&format!("| {f}"))).count(), 1, "{out}");
    }
}

#[test]
fn bench_csv_with_ccps() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bench.csv");
    let o = batchrng(&["bench", "--n", "100000", "--format", "csv", "--cpu-ghz", "2.6", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let ccps = header.iter().position(|h| *h == "ccps").unwrap();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 18);
    for r in rows {
        let v: f64 = r.split(',').nth(ccps).unwrap().parse().unwrap();
        assert!(v > 0.0);
    }
}

#[test]
fn bench_binary_is_usage_error() {
    let o = batchrng(&["bench", "--n", "100000", "--format", "binary"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gibbs_pairs_inside_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.txt");
    let o = batchrng(&["gibbs", "--n", "20000", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let chain = std::fs::read_to_string(&path).unwrap();
    let mut count = 0;
    for line in chain.lines() {
        let (x, y) = line.split_once(',').unwrap();
        let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
        assert!(x > 0.0 && y > 0.0 && x + y < 1.0);
        count += 1;
    }
    assert_eq!(count, 20000);
    let summary = stdout(&o);
    assert!(summary.contains("after 1000") && summary.contains("cov_xy"));
    assert!(summary.contains("inside     20000/20000"));
}

#[test]
fn gibbs_summary_near_analytic_values() {
    let o = batchrng(&["gibbs", "--n", "1000000"]);
    let out = stdout(&o);
    let value = |name: &str| -> f64 {
        let line = out.lines().find(|l| l.starts_with(name)).unwrap();
        line.split_whitespace().nth(1).unwrap().parse().unwrap()
    };
    assert!((value("mean_x") - 1.0 / 3.0).abs() < 0.01);
    assert!((value("mean_y") - 1.0 / 3.0).abs() < 0.01);
    assert!((value("var_x") - 1.0 / 18.0).abs() < 0.005);
    assert!((value("cov_xy") + 1.0 / 36.0).abs() < 0.005);
}

#[test]
fn gibbs_zero_iterations_is_usage_error() {
    assert_eq!(batchrng(&["gibbs", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn selftest_passes_for_several_seeds() {
    for seed in ["1", "2"] {
        let o = batchrng(&["selftest", "--seed", seed]);
        let out = stdout(&o);
        assert!(o.status.success(), "{out}");
        assert!(out.lines().filter(|l| l.starts_with("PASS")).count() > 50);
        assert!(!out.contains("FAIL"));
    }
}

#[test]
fn selftest_rejects_tiny_samples() {
    let o = batchrng(&["selftest", "--ks-n", "10"]);
    assert_eq!(o.status.code(), Some(1));
}
