//! Timing harness comparing three ways of producing `n` deviates:
//!
//! * `Batch`: one batch call with fixed parameters.
//! * `OaatNaive`: a loop of batch calls with `n = 1`, parameters read per
//!   iteration from an array in memory.
//! * `OaatBuffered`: a loop of buffered `get_*` calls, same parameter array.
//!
//! Outputs always go to a preallocated, zero-cleared buffer and their mean is
//! reported, so the generation work cannot be optimized away.

use std::fmt::Write as _;
use std::time::Instant;

use crate::buffer::BufferConfig;
use crate::error::{Error, Result};
use crate::sampler::{BatchRng, DistributionSpec, Family};

/// Smallest `n` accepted for a timed run.
pub const MIN_BENCH_N: usize = 100_000;
pub const DEFAULT_BENCH_N: usize = 10_000_000;
pub const WARMUP_REPS: usize = 1;
pub const TIMED_REPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchMode {
    Batch,
    OaatNaive,
    OaatBuffered,
}

impl BenchMode {
    pub const ALL: [BenchMode; 3] = [BenchMode::Batch, BenchMode::OaatNaive, BenchMode::OaatBuffered];

    pub fn name(self) -> &'static str {
        match self {
            BenchMode::Batch => "batch",
            BenchMode::OaatNaive => "oaat_naive",
            BenchMode::OaatBuffered => "oaat_buffered",
        }
    }
}

/// Per-iteration parameters for a scalar family, packed as `[p0, p1, p2]`
/// in the argument order of the matching `get_*` method.
#[derive(Debug, Clone)]
pub struct ParamTable {
    family: Family,
    rows: Vec<[f64; 3]>,
}

impl ParamTable {
    /// `n` rows cycling through 16 valid parameter settings.
    pub fn varying(family: Family, n: usize) -> Result<Self> {
        let row = |i: usize| -> [f64; 3] {
            let k = (i % 16) as f64 / 16.0;
            match family {
                Family::Uniform => [-k, 1.0 + k, 0.0],
                Family::Gaussian => [k, 1.0 + k, 0.0],
                Family::Exponential | Family::Laplace => [k, 1.0 + k, 0.0],
                Family::Weibull => [1.5 + k, 0.0, 1.0 + k],
                Family::Gamma => [2.0 + k, 0.0, 1.0 + k],
                Family::Dirichlet => [0.0; 3],
            }
        };
        if family == Family::Dirichlet {
            return Err(Error::Unsupported("dirichlet benchmarks"));
        }
        Ok(ParamTable {
            family,
            rows: (0..n).map(row).collect(),
        })
    }

    /// `n` copies of one parameter setting.
    pub fn constant(spec: &DistributionSpec, n: usize) -> Result<Self> {
        spec.validate()?;
        let row = match *spec {
            DistributionSpec::Uniform { a, b } => [a, b, 0.0],
            DistributionSpec::Gaussian { mu, sigma } => [mu, sigma, 0.0],
            DistributionSpec::Exponential { a, beta } | DistributionSpec::Laplace { a, beta } => [a, beta, 0.0],
            DistributionSpec::Weibull { alpha, a, beta } | DistributionSpec::Gamma { alpha, a, beta } => {
                [alpha, a, beta]
            }
            DistributionSpec::Dirichlet { .. } => return Err(Error::Unsupported("dirichlet benchmarks")),
        };
        Ok(ParamTable {
            family: spec.family(),
            rows: vec![row; n],
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[[f64; 3]] {
        &self.rows
    }

    pub fn spec(&self, i: usize) -> DistributionSpec {
        let [p0, p1, p2] = self.rows[i];
        match self.family {
            Family::Uniform => DistributionSpec::Uniform { a: p0, b: p1 },
            Family::Gaussian => DistributionSpec::Gaussian { mu: p0, sigma: p1 },
            Family::Exponential => DistributionSpec::Exponential { a: p0, beta: p1 },
            Family::Laplace => DistributionSpec::Laplace { a: p0, beta: p1 },
            Family::Weibull => DistributionSpec::Weibull { alpha: p0, a: p1, beta: p2 },
            Family::Gamma => DistributionSpec::Gamma { alpha: p0, a: p1, beta: p2 },
            Family::Dirichlet => unreachable!("tables are never built for dirichlet"),
        }
    }

    fn validate(&self) -> Result<()> {
        (0..self.rows.len()).try_for_each(|i| self.spec(i).validate())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRecord {
    pub family: Family,
    pub mode: BenchMode,
    pub n: usize,
    pub buffer_len: usize,
    pub ns_per_sample: f64,
    pub ccps: Option<f64>,
    pub checksum_mean: f64,
}

impl BenchmarkRecord {
    pub fn with_cpu_ghz(mut self, ghz: Option<f64>) -> Self {
        self.ccps = ghz.map(|g| self.ns_per_sample * g);
        self
    }

    /// CCPS when a clock rate was supplied, ns/sample otherwise.
    pub fn metric(&self) -> f64 {
        self.ccps.unwrap_or(self.ns_per_sample)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedupRow {
    pub family: Family,
    pub batch: BenchmarkRecord,
    pub oaat: BenchmarkRecord,
    pub buffered: BenchmarkRecord,
    pub speedup: f64,
}

impl SpeedupRow {
    pub fn new(batch: BenchmarkRecord, oaat: BenchmarkRecord, buffered: BenchmarkRecord) -> Self {
        let speedup = oaat.metric() / buffered.metric();
        SpeedupRow {
            family: batch.family,
            batch,
            oaat,
            buffered,
            speedup,
        }
    }

    pub fn records(&self) -> [&BenchmarkRecord; 3] {
        [&self.batch, &self.oaat, &self.buffered]
    }
}

// One generation pass over `out`; the returned value is not timed.
fn generate(
    rng: &mut BatchRng,
    mode: BenchMode,
    params: &ParamTable,
    out: &mut [f64],
) -> Result<()> {
    let n = out.len();
    if mode == BenchMode::Batch {
        return rng.sample_batch(&params.spec(0), out);
    }
    let rows = &params.rows()[..n];
    macro_rules! oaat {
        (|$p:ident| $naive:expr, $buffered:expr) => {
            match mode {
                BenchMode::OaatNaive => {
                    for (i, $p) in rows.iter().enumerate() {
                        $naive(rng, &mut out[i..i + 1])?;
                    }
                }
                _ => {
                    for (x, $p) in out.iter_mut().zip(rows) {
                        *x = $buffered(rng)?;
                    }
                }
            }
        };
    }
    match params.family() {
        Family::Uniform => oaat!(
            |p| |r: &mut BatchRng, o| r.get_uniform_batch(p[0], p[1], o),
            |r: &mut BatchRng| r.get_uniform(p[0], p[1])
        ),
        Family::Gaussian => oaat!(
            |p| |r: &mut BatchRng, o| r.get_gaussian_batch(p[0], p[1], o),
            |r: &mut BatchRng| r.get_gaussian(p[0], p[1])
        ),
        Family::Exponential => oaat!(
            |p| |r: &mut BatchRng, o| r.get_exponential_batch(p[0], p[1], o),
            |r: &mut BatchRng| r.get_exponential(p[0], p[1])
        ),
        Family::Laplace => oaat!(
            |p| |r: &mut BatchRng, o| r.get_laplace_batch(p[0], p[1], o),
            |r: &mut BatchRng| r.get_laplace(p[0], p[1])
        ),
        Family::Weibull => oaat!(
            |p| |r: &mut BatchRng, o| r.get_weibull_batch(p[0], p[1], p[2], o),
            |r: &mut BatchRng| r.get_weibull(p[0], p[1], p[2])
        ),
        Family::Gamma => oaat!(
            |p| |r: &mut BatchRng, o| r.get_gamma_batch(p[0], p[1], p[2], o),
            |r: &mut BatchRng| r.get_gamma(p[0], p[1], p[2])
        ),
        Family::Dirichlet => return Err(Error::Unsupported("dirichlet benchmarks")),
    }
    Ok(())
}

/// Times one (family, mode) pair: one warm-up pass, then the minimum over
/// [`TIMED_REPS`] passes. Each pass starts from a fresh generator with the
/// same seed, so every pass writes the same values.
pub fn run_benchmark(
    family: Family,
    mode: BenchMode,
    n: usize,
    buffer_len: usize,
    seed: u64,
    params: &ParamTable,
) -> Result<BenchmarkRecord> {
    if n < MIN_BENCH_N {
        return Err(Error::TooSmallN { n, min: MIN_BENCH_N });
    }
    if params.family() != family {
        return Err(Error::InvalidParams(format!(
            "parameter table is for {}, benchmark asked for {}",
            params.family(),
            family
        )));
    }
    let needed = if mode == BenchMode::Batch { 1 } else { n };
    if params.len() < needed {
        return Err(Error::InvalidParams(format!(
            "parameter table has {} rows, {} needed",
            params.len(),
            needed
        )));
    }
    params.validate()?;
    let config = match mode {
        BenchMode::OaatBuffered => BufferConfig::uniform(buffer_len),
        _ => BufferConfig::uniform(0),
    };
    config.validate()?;

    let mut out = vec![0.0; n];
    let mut best = f64::INFINITY;
    for rep in 0..WARMUP_REPS + TIMED_REPS {
        let mut rng = BatchRng::new(seed, config)?;
        out.fill(0.0);
        let start = Instant::now();
        generate(&mut rng, mode, params, &mut out)?;
        let elapsed = start.elapsed();
        if rep >= WARMUP_REPS {
            best = best.min(elapsed.as_nanos() as f64);
        }
    }
    let checksum_mean = out.iter().sum::<f64>() / n as f64;
    Ok(BenchmarkRecord {
        family,
        mode,
        n,
        buffer_len,
        // a zero reading would only come from a broken clock; keep the invariant
        ns_per_sample: (best / n as f64).max(f64::MIN_POSITIVE),
        ccps: None,
        checksum_mean,
    })
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub n: usize,
    pub buffer_len: usize,
    pub seed: u64,
    pub cpu_ghz: Option<f64>,
    pub rows: Vec<SpeedupRow>,
}

/// All three modes for every scalar family, with varying OAAT parameters.
pub fn run_suite(n: usize, buffer_len: usize, seed: u64, cpu_ghz: Option<f64>) -> Result<SuiteReport> {
    run_suite_with(n, buffer_len, seed, cpu_ghz, |_| {})
}

/// [`run_suite`] with a callback after each finished row.
pub fn run_suite_with(
    n: usize,
    buffer_len: usize,
    seed: u64,
    cpu_ghz: Option<f64>,
    mut on_row: impl FnMut(&SpeedupRow),
) -> Result<SuiteReport> {
    if n < MIN_BENCH_N {
        return Err(Error::TooSmallN { n, min: MIN_BENCH_N });
    }
    if let Some(g) = cpu_ghz {
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::InvalidParams(format!("cpu frequency must be > 0 GHz, got {g}")));
        }
    }
    let mut rows = Vec::with_capacity(Family::SCALAR.len());
    for family in Family::SCALAR {
        let params = ParamTable::varying(family, n)?;
        let run = |mode| -> Result<BenchmarkRecord> {
            Ok(run_benchmark(family, mode, n, buffer_len, seed, &params)?.with_cpu_ghz(cpu_ghz))
        };
        let batch = run(BenchMode::Batch)?;
        let oaat = run(BenchMode::OaatNaive)?;
        let buffered = run(BenchMode::OaatBuffered)?;
        let row = SpeedupRow::new(batch, oaat, buffered);
        on_row(&row);
        rows.push(row);
    }
    Ok(SuiteReport {
        n,
        buffer_len,
        seed,
        cpu_ghz,
        rows,
    })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.3}")).unwrap_or_default()
}

impl SuiteReport {
    pub fn unit(&self) -> &'static str {
        if self.cpu_ghz.is_some() {
            "CCPS"
        } else {
            "ns/sample"
        }
    }

    /// `family,mode,n,buffer_len,ns_per_sample,ccps`, one line per record.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("family,mode,n,buffer_len,ns_per_sample,ccps\n");
        for row in &self.rows {
            for r in row.records() {
                writeln!(
                    s,
                    "{},{},{},{},{:.4},{}",
                    r.family.name(),
                    r.mode.name(),
                    r.n,
                    r.buffer_len,
                    r.ns_per_sample,
                    fmt_opt(r.ccps)
                )
                .unwrap();
            }
        }
        s
    }

    /// Rows are families; columns are Batch, OAAT, Buffered and Speedup.
    pub fn to_markdown(&self) -> String {
        let mut s = format!(
            "Cost per sample in {} (n = {}, buffer length {}, min of {} runs).\n\n",
            self.unit(),
            self.n,
            self.buffer_len,
            TIMED_REPS
        );
        s.push_str("| Distribution | Batch | OAAT | Buffered | Speedup |\n");
        s.push_str("|---|---:|---:|---:|---:|\n");
        for row in &self.rows {
            writeln!(
                s,
                "| {} | {:.2} | {:.2} | {:.2} | {:.1}x |",
                row.family,
                row.batch.metric(),
                row.oaat.metric(),
                row.buffered.metric(),
                row.speedup
            )
            .unwrap();
        }
        s
    }

    /// Plain aligned table.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{:<12} {:>10} {:>10} {:>10} {:>8}   ({})\n",
            "family",
            "batch",
            "oaat",
            "buffered",
            "speedup",
            self.unit()
        );
        for row in &self.rows {
            writeln!(
                s,
                "{:<12} {:>10.2} {:>10.2} {:>10.2} {:>7.1}x",
                row.family.name(),
                row.batch.metric(),
                row.oaat.metric(),
                row.buffered.metric(),
                row.speedup
            )
            .unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(mode: BenchMode, ns: f64) -> BenchmarkRecord {
        BenchmarkRecord {
            family: Family::Uniform,
            mode,
            n: MIN_BENCH_N,
            buffer_len: 1000,
            ns_per_sample: ns,
            ccps: None,
            checksum_mean: 0.5,
        }
    }

    #[test]
    fn speedup_is_oaat_over_buffered() {
        let ghz = Some(2.6);
        let row = SpeedupRow::new(
            record(BenchMode::Batch, 4.3 / 2.6).with_cpu_ghz(ghz),
            record(BenchMode::OaatNaive, 65.1 / 2.6).with_cpu_ghz(ghz),
            record(BenchMode::OaatBuffered, 12.4 / 2.6).with_cpu_ghz(ghz),
        );
        assert!((row.speedup - 65.1 / 12.4).abs() < 1e-12);
        assert_eq!(format!("{:.1}", row.speedup), "5.2");
        assert!((row.batch.ccps.unwrap() - 4.3).abs() < 1e-12);
    }

    #[test]
    fn ccps_to_ns_conversion() {
        // 4.3 cycles at 2.6 GHz
        let ns: f64 = 4.3 / 2.6;
        assert!((ns - 1.654).abs() < 1e-3);
        assert!(record(BenchMode::Batch, ns).ccps.is_none());
    }

    #[test]
    fn small_n_rejected() {
        let p = ParamTable::varying(Family::Uniform, 10).unwrap();
        assert_eq!(
            run_benchmark(Family::Uniform, BenchMode::Batch, 10, 1000, 1, &p),
            Err(Error::TooSmallN { n: 10, min: MIN_BENCH_N })
        );
        assert!(matches!(run_suite(10, 1000, 1, None), Err(Error::TooSmallN { .. })));
    }

    #[test]
    fn short_param_table_rejected() {
        let p = ParamTable::varying(Family::Gamma, 10).unwrap();
        let r = run_benchmark(Family::Gamma, BenchMode::OaatBuffered, MIN_BENCH_N, 1000, 1, &p);
        assert!(matches!(r, Err(Error::InvalidParams(_))));
    }

    #[test]
    fn varying_tables_are_valid() {
        for f in Family::SCALAR {
            let t = ParamTable::varying(f, 64).unwrap();
            t.validate().unwrap();
            assert_ne!(t.rows()[0], t.rows()[1]);
        }
        assert!(ParamTable::varying(Family::Dirichlet, 4).is_err());
    }

    #[test]
    fn modes_write_every_output_and_repeat() {
        let n = MIN_BENCH_N;
        for family in Family::SCALAR {
            let params = ParamTable::varying(family, n).unwrap();
            for mode in BenchMode::ALL {
                let a = run_benchmark(family, mode, n, 1000, 5, &params).unwrap();
                let b = run_benchmark(family, mode, n, 1000, 5, &params).unwrap();
                assert_eq!(a.checksum_mean, b.checksum_mean, "{family} {mode:?}");
                assert!(a.ns_per_sample > 0.0 && a.checksum_mean.is_finite());
            }
        }
    }

    #[test]
    fn buffered_checksum_matches_direct_loop() {
        let n = MIN_BENCH_N;
        let params = ParamTable::varying(Family::Uniform, n).unwrap();
        let rec = run_benchmark(Family::Uniform, BenchMode::OaatBuffered, n, 1000, 3, &params).unwrap();
        let mut rng = BatchRng::new(3, BufferConfig::uniform(1000)).unwrap();
        let direct: f64 = params
            .rows()
            .iter()
            .map(|p| rng.get_uniform(p[0], p[1]).unwrap())
            .sum::<f64>()
            / n as f64;
        assert_eq!(rec.checksum_mean, direct);
    }

    #[test]
    fn report_formats() {
        let row = SpeedupRow::new(
            record(BenchMode::Batch, 1.0),
            record(BenchMode::OaatNaive, 8.0),
            record(BenchMode::OaatBuffered, 2.0),
        );
        let report = SuiteReport {
            n: MIN_BENCH_N,
            buffer_len: 1000,
            seed: 1,
            cpu_ghz: None,
            rows: vec![row],
        };
        let csv = report.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "family,mode,n,buffer_len,ns_per_sample,ccps");
        assert_eq!(lines[1], "uniform,batch,100000,1000,1.0000,");
        assert_eq!(lines.len(), 4);
        let md = report.to_markdown();
        assert!(md.contains("| Distribution | Batch | OAAT | Buffered | Speedup |"));
        assert!(md.contains("| Uniform | 1.00 | 8.00 | 2.00 | 4.0x |"));
    }
}
