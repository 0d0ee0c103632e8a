//! Command-line front end for `batchrng`: the benchmark suite, raw sample
//! emission, the triangle Gibbs chain and a statistical self-test.
//!
//! Exit codes: 0 on success, 1 when a check or parameter validation fails,
//! 2 on a usage error.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use batchrng::bench::{self, DEFAULT_BENCH_N};
use batchrng::gibbs::{self, TriangleSummary, BURN_IN};
use batchrng::{BatchRng, BufferConfig, DistributionSpec, Family, DEFAULT_BUFFER_LEN};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod selftest;

pub const DEFAULT_SEED: u64 = 20_140_101;

#[derive(Debug, Parser)]
#[command(name = "batchrng", version, about = "Buffered random deviates: benchmarks, samples and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time Batch, naive OAAT and buffered OAAT generation for every family
    Bench(BenchArgs),
    /// Emit deviates from one distribution
    Sample(SampleArgs),
    /// Run the Gibbs sampler for the uniform density on the unit triangle
    Gibbs(GibbsArgs),
    /// Moments, KS fits, stream equivalence and buffer accounting
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Md,
    Text,
    Binary,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Length of each of the four standard buffers; 0 disables them
    #[arg(long, default_value_t = DEFAULT_BUFFER_LEN)]
    pub buffer_len: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = DEFAULT_BENCH_N)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Format::Md)]
    pub format: Format,
    /// Report clock cycles per sample at this frequency
    #[arg(long)]
    pub cpu_ghz: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_family)]
    pub dist: Family,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Lower bound (uniform) or displacement
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Upper bound (uniform)
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Shape (weibull, gamma)
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Scale (exponential, laplace, weibull, gamma)
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Comma-separated dirichlet shapes
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub alphas: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GibbsArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,
    /// Write every (x, y) state here
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[command(flatten)]
    pub common: Common,
    /// Sample size for each KS test
    #[arg(long, default_value_t = selftest::DEFAULT_KS_N)]
    pub ks_n: usize,
    /// Sample size for each moment check
    #[arg(long, default_value_t = selftest::DEFAULT_MOMENT_N)]
    pub moment_n: usize,
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).ok_or_else(|| {
        format!("unknown distribution '{s}' (expected uniform, gaussian, exponential, laplace, weibull, gamma or dirichlet)")
    })
}

#[derive(Debug)]
pub enum CliError {
    /// Flags that parse but do not fit together.
    Usage(String),
    /// Invalid parameters, failed checks or library errors.
    Failure(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<batchrng::Error> for CliError {
    fn from(e: batchrng::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

/// Runs one parsed command. Primary output goes to `out` unless the command
/// has `--out`; progress and summaries that must not mix with data go to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Bench(args) => cmd_bench(&args, out, err),
        Command::Sample(args) => cmd_sample(&args, out),
        Command::Gibbs(args) => cmd_gibbs(&args, out),
        Command::Selftest(args) => cmd_selftest(&args, out),
    }
}

fn with_output(path: &Option<PathBuf>, out: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> CliResult) -> CliResult {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::Failure(format!("cannot create {}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = BufWriter::new(out);
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    if args.format == Format::Binary {
        return Err(CliError::Usage("bench supports --format csv, md or text".into()));
    }
    let report = bench::run_suite_with(args.n, args.common.buffer_len, args.common.seed, args.cpu_ghz, |row| {
        let _ = writeln!(err, "{:<12} done", row.family.name());
    })?;
    let text = match args.format {
        Format::Csv => report.to_csv(),
        Format::Md => report.to_markdown(),
        _ => report.to_text(),
    };
    with_output(&args.out, out, |w| Ok(w.write_all(text.as_bytes())?))
}

/// Builds the distribution from the flags, filling in unit defaults and
/// rejecting flags that do not belong to the family.
pub fn sample_spec(args: &SampleArgs) -> CliResult<DistributionSpec> {
    let given = [
        ("a", args.a.is_some()),
        ("b", args.b.is_some()),
        ("mu", args.mu.is_some()),
        ("sigma", args.sigma.is_some()),
        ("alpha", args.alpha.is_some()),
        ("beta", args.beta.is_some()),
        ("alphas", args.alphas.is_some()),
    ];
    let allowed: &[&str] = match args.dist {
        Family::Uniform => &["a", "b"],
        Family::Gaussian => &["mu", "sigma"],
        Family::Exponential | Family::Laplace => &["a", "beta"],
        Family::Weibull | Family::Gamma => &["alpha", "a", "beta"],
        Family::Dirichlet => &["alphas"],
    };
    if let Some((flag, _)) = given.iter().find(|(f, set)| *set && !allowed.contains(f)) {
        return Err(CliError::Usage(format!("--{flag} does not apply to {}", args.dist.name())));
    }
    let a = args.a.unwrap_or(0.0);
    let beta = args.beta.unwrap_or(1.0);
    let alpha = args.alpha.unwrap_or(1.0);
    let spec = match args.dist {
        Family::Uniform => DistributionSpec::uniform(a, args.b.unwrap_or(1.0)),
        Family::Gaussian => DistributionSpec::gaussian(args.mu.unwrap_or(0.0), args.sigma.unwrap_or(1.0)),
        Family::Exponential => DistributionSpec::exponential(a, beta),
        Family::Laplace => DistributionSpec::laplace(a, beta),
        Family::Weibull => DistributionSpec::weibull(alpha, a, beta),
        Family::Gamma => DistributionSpec::gamma(alpha, a, beta),
        Family::Dirichlet => match &args.alphas {
            Some(alphas) => DistributionSpec::dirichlet(alphas.clone()),
            None => return Err(CliError::Usage("dirichlet needs --alphas".into())),
        },
    };
    Ok(spec?)
}

fn rng_for(common: &Common) -> CliResult<BatchRng> {
    Ok(BatchRng::new(common.seed, BufferConfig::uniform(common.buffer_len))?)
}

/// 17 significant digits, which round-trips every `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn cmd_sample(args: &SampleArgs, out: &mut dyn Write) -> CliResult {
    let binary = match args.format {
        Format::Text => false,
        Format::Binary => true,
        _ => return Err(CliError::Usage("sample supports --format text or binary".into())),
    };
    let spec = sample_spec(args)?;
    let mut rng = rng_for(&args.common)?;
    with_output(&args.out, out, |w| {
        let emit = |w: &mut dyn Write, xs: &[f64]| -> io::Result<()> {
            if binary {
                for x in xs {
                    w.write_all(&x.to_le_bytes())?;
                }
            } else {
                let line: Vec<String> = xs.iter().map(|&x| format_f64(x)).collect();
                writeln!(w, "{}", line.join(","))?;
            }
            Ok(())
        };
        if let DistributionSpec::Dirichlet { alphas } = &spec {
            let mut v = vec![0.0; alphas.len()];
            for _ in 0..args.n {
                rng.get_dirichlet(alphas, &mut v)?;
                emit(w, &v)?;
            }
        } else {
            for _ in 0..args.n {
                let x = rng.sample(&spec)?;
                emit(w, &[x])?;
            }
        }
        Ok(())
    })
}

pub fn cmd_gibbs(args: &GibbsArgs, out: &mut dyn Write) -> CliResult {
    let binary = match args.format {
        Format::Text => false,
        Format::Binary => true,
        _ => return Err(CliError::Usage("gibbs supports --format text or binary".into())),
    };
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let mut rng = rng_for(&args.common)?;
    let chain = gibbs::gibbs_triangle(&mut rng, args.n)?;
    if let Some(path) = &args.out {
        with_output(&Some(path.clone()), out, |w| {
            for &(x, y) in &chain {
                if binary {
                    w.write_all(&x.to_le_bytes())?;
                    w.write_all(&y.to_le_bytes())?;
                } else {
                    writeln!(w, "{},{}", format_f64(x), format_f64(y))?;
                }
            }
            Ok(())
        })?;
    }
    let all = gibbs::summarize(&chain).ok();
    let kept = chain.get(BURN_IN..).and_then(|c| gibbs::summarize(c).ok());
    write_gibbs_summary(out, args, all, kept)?;
    Ok(())
}

fn write_gibbs_summary(
    w: &mut dyn Write,
    args: &GibbsArgs,
    all: Option<TriangleSummary>,
    kept: Option<TriangleSummary>,
) -> io::Result<()> {
    writeln!(w, "gibbs triangle: n = {}, seed = {}", args.n, args.common.seed)?;
    writeln!(w, "{:<10} {:>24} {:>24}", "", "all", format!("after {BURN_IN}"))?;
    let cell = |s: Option<TriangleSummary>, f: fn(&TriangleSummary) -> f64| {
        s.map(|s| format_f64(f(&s))).unwrap_or_else(|| "-".into())
    };
    type Field = fn(&TriangleSummary) -> f64;
    let rows: [(&str, Field); 5] = [
        ("mean_x", |s| s.mean_x),
        ("mean_y", |s| s.mean_y),
        ("var_x", |s| s.var_x),
        ("var_y", |s| s.var_y),
        ("cov_xy", |s| s.cov_xy),
    ];
    for (name, f) in rows {
        writeln!(w, "{name:<10} {:>24} {:>24}", cell(all, f), cell(kept, f))?;
    }
    if let Some(s) = all {
        writeln!(w, "inside     {}/{}", s.inside, s.n)?;
    }
    Ok(())
}

pub fn cmd_selftest(args: &SelftestArgs, out: &mut dyn Write) -> CliResult {
    let checks = selftest::run_all(args.common.seed, args.ks_n, args.moment_n)?;
    let mut w = BufWriter::new(out);
    for c in &checks {
        writeln!(w, "{} {:<44} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail)?;
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    writeln!(w, "{} checks, {} failed", checks.len(), failed)?;
    w.flush()?;
    if failed > 0 {
        return Err(CliError::Failure(format!("{failed} self-test checks failed")));
    }
    Ok(())
}
