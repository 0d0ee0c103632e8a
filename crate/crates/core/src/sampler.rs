//! [`BatchRng`]: one engine feeding four buffers of standard deviates, with
//! per-call parameters applied at the take site.
//!
//! Uniform, Gaussian and exponential draws are affine maps of one buffered
//! deviate. Laplace, Weibull, Gamma and Dirichlet are built on top of those
//! buffers. The `*_batch` methods bypass the buffers and generate straight
//! from the engine, which is the fixed-parameter baseline the buffered path
//! is measured against.

use crate::buffer::{BufferConfig, DeviateBuffer, Disabled};
use crate::engine::Engine;
use crate::error::{Error, Result, StandardKind};
use crate::math;

use std::fmt;

const CHUNK: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Uniform,
    Gaussian,
    Exponential,
    Laplace,
    Weibull,
    Gamma,
    Dirichlet,
}

impl Family {
    /// The scalar families, in benchmark table order.
    pub const SCALAR: [Family; 6] = [
        Family::Uniform,
        Family::Gaussian,
        Family::Exponential,
        Family::Laplace,
        Family::Weibull,
        Family::Gamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Uniform => "uniform",
            Family::Gaussian => "gaussian",
            Family::Exponential => "exponential",
            Family::Laplace => "laplace",
            Family::Weibull => "weibull",
            Family::Gamma => "gamma",
            Family::Dirichlet => "dirichlet",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        let f = match s.to_ascii_lowercase().as_str() {
            "uniform" => Family::Uniform,
            "gaussian" | "normal" => Family::Gaussian,
            "exponential" => Family::Exponential,
            "laplace" => Family::Laplace,
            "weibull" => Family::Weibull,
            "gamma" => Family::Gamma,
            "dirichlet" => Family::Dirichlet,
            _ => return None,
        };
        Some(f)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name();
        let mut chars = name.chars();
        let first = chars.next().unwrap().to_ascii_uppercase();
        write!(f, "{first}{}", chars.as_str())
    }
}

/// A distribution family together with its parameters.
///
/// Displacement `a` and scale `beta` follow the usual vector-library
/// convention; shape `alpha` comes first where there is one.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec {
    Uniform { a: f64, b: f64 },
    Gaussian { mu: f64, sigma: f64 },
    Exponential { a: f64, beta: f64 },
    Laplace { a: f64, beta: f64 },
    Weibull { alpha: f64, a: f64, beta: f64 },
    Gamma { alpha: f64, a: f64, beta: f64 },
    Dirichlet { alphas: Vec<f64> },
}

impl DistributionSpec {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        check_uniform(a, b)?;
        Ok(DistributionSpec::Uniform { a, b })
    }

    pub fn gaussian(mu: f64, sigma: f64) -> Result<Self> {
        check_gaussian(mu, sigma)?;
        Ok(DistributionSpec::Gaussian { mu, sigma })
    }

    pub fn exponential(a: f64, beta: f64) -> Result<Self> {
        check_location_scale(a, beta)?;
        Ok(DistributionSpec::Exponential { a, beta })
    }

    pub fn laplace(a: f64, beta: f64) -> Result<Self> {
        check_location_scale(a, beta)?;
        Ok(DistributionSpec::Laplace { a, beta })
    }

    pub fn weibull(alpha: f64, a: f64, beta: f64) -> Result<Self> {
        check_shape_location_scale(alpha, a, beta)?;
        Ok(DistributionSpec::Weibull { alpha, a, beta })
    }

    pub fn gamma(alpha: f64, a: f64, beta: f64) -> Result<Self> {
        check_shape_location_scale(alpha, a, beta)?;
        Ok(DistributionSpec::Gamma { alpha, a, beta })
    }

    pub fn dirichlet(alphas: Vec<f64>) -> Result<Self> {
        check_dirichlet(&alphas)?;
        Ok(DistributionSpec::Dirichlet { alphas })
    }

    pub fn family(&self) -> Family {
        match self {
            DistributionSpec::Uniform { .. } => Family::Uniform,
            DistributionSpec::Gaussian { .. } => Family::Gaussian,
            DistributionSpec::Exponential { .. } => Family::Exponential,
            DistributionSpec::Laplace { .. } => Family::Laplace,
            DistributionSpec::Weibull { .. } => Family::Weibull,
            DistributionSpec::Gamma { .. } => Family::Gamma,
            DistributionSpec::Dirichlet { .. } => Family::Dirichlet,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DistributionSpec::Uniform { a, b } => check_uniform(a, b),
            DistributionSpec::Gaussian { mu, sigma } => check_gaussian(mu, sigma),
            DistributionSpec::Exponential { a, beta } | DistributionSpec::Laplace { a, beta } => {
                check_location_scale(a, beta)
            }
            DistributionSpec::Weibull { alpha, a, beta } | DistributionSpec::Gamma { alpha, a, beta } => {
                check_shape_location_scale(alpha, a, beta)
            }
            DistributionSpec::Dirichlet { ref alphas } => check_dirichlet(alphas),
        }
    }
}

#[cold]
#[inline(never)]
fn invalid(msg: String) -> Error {
    Error::InvalidParams(msg)
}

#[inline(always)]
fn check_uniform(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(bad_uniform(a, b))
    }
}

#[cold]
#[inline(never)]
fn bad_uniform(a: f64, b: f64) -> Error {
    invalid(format!("a < b required (both finite), got a = {a}, b = {b}"))
}

#[inline(always)]
fn check_gaussian(mu: f64, sigma: f64) -> Result<()> {
    if mu.is_finite() && sigma.is_finite() && sigma >= 0.0 {
        Ok(())
    } else {
        Err(bad_gaussian(mu, sigma))
    }
}

#[cold]
#[inline(never)]
fn bad_gaussian(mu: f64, sigma: f64) -> Error {
    invalid(format!("finite mu and sigma >= 0 required, got mu = {mu}, sigma = {sigma}"))
}

#[inline(always)]
fn check_location_scale(a: f64, beta: f64) -> Result<()> {
    if a.is_finite() && beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(bad_location_scale(a, beta))
    }
}

#[cold]
#[inline(never)]
fn bad_location_scale(a: f64, beta: f64) -> Error {
    invalid(format!("finite a and beta > 0 required, got a = {a}, beta = {beta}"))
}

#[inline(always)]
fn check_shape_location_scale(alpha: f64, a: f64, beta: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(bad_shape(alpha));
    }
    check_location_scale(a, beta)
}

#[cold]
#[inline(never)]
fn bad_shape(alpha: f64) -> Error {
    invalid(format!("alpha > 0 required, got alpha = {alpha}"))
}

fn check_dirichlet(alphas: &[f64]) -> Result<()> {
    if alphas.len() < 2 {
        return Err(invalid(format!(
            "dirichlet needs at least 2 components, got {}",
            alphas.len()
        )));
    }
    if let Some(bad) = alphas.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
        return Err(invalid(format!("all dirichlet alphas must be > 0, got {bad}")));
    }
    Ok(())
}

/// `a + (b - a) u`, kept strictly below `b` when rounding would reach it.
#[inline(always)]
pub fn uniform_transform(u: f64, a: f64, b: f64) -> f64 {
    let x = a + (b - a) * u;
    if x < b {
        x
    } else {
        b.next_down()
    }
}

/// Sign from the uniform: `u < 0.5` is the negative side.
#[inline(always)]
pub fn laplace_transform(e: f64, u: f64, a: f64, beta: f64) -> f64 {
    let signed = if u < 0.5 { -e } else { e };
    a + beta * signed
}

/// `a + beta e^(1/alpha)`; shape 1 passes the exponential through untouched.
#[inline(always)]
pub fn weibull_transform(e: f64, alpha: f64, a: f64, beta: f64) -> f64 {
    let w = if alpha == 1.0 {
        e
    } else {
        math::pow_nonneg(e, 1.0 / alpha)
    };
    a + beta * w
}

/// Marsaglia–Tsang constants for shape `>= 1`.
#[derive(Debug, Clone, Copy)]
struct GammaSetup {
    d: f64,
    c: f64,
    /// Original shape, when it was below one and had to be boosted.
    boost_alpha: Option<f64>,
}

impl GammaSetup {
    #[inline]
    fn new(alpha: f64) -> Self {
        let (shape, boost_alpha) = if alpha < 1.0 {
            (alpha + 1.0, Some(alpha))
        } else {
            (alpha, None)
        };
        let d = shape - 1.0 / 3.0;
        GammaSetup {
            d,
            c: 1.0 / (9.0 * d).sqrt(),
            boost_alpha,
        }
    }

    /// Accept/reject for one candidate. Returns `(accept, d v)`.
    #[inline(always)]
    fn trial(&self, z: f64, log_u: f64) -> (bool, f64) {
        let v = 1.0 + self.c * z;
        let v3 = v * v * v;
        let bound = 0.5 * z * z + self.d - self.d * v3 + self.d * math::ln(v3);
        (v > 0.0 && log_u < bound, self.d * v3)
    }
}

/// Running totals of Marsaglia–Tsang candidates, for acceptance-rate checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GammaCounters {
    pub trials: u64,
    pub accepted: u64,
}

impl GammaCounters {
    pub fn acceptance_rate(&self) -> f64 {
        if self.trials == 0 {
            return f64::NAN;
        }
        self.accepted as f64 / self.trials as f64
    }
}

fn disabled_in(sampler: &'static str) -> impl Fn(Disabled) -> Error {
    move |Disabled(kind)| Error::BufferDisabled {
        kind,
        sampler: Some(sampler),
    }
}

/// Buffered random deviates for one-at-a-time draws with varying parameters.
///
/// Not `Sync`-shared by design: give each thread its own instance and seed.
#[derive(Debug, Clone)]
pub struct BatchRng {
    engine: Engine,
    uniform: DeviateBuffer,
    gaussian: DeviateBuffer,
    exponential: DeviateBuffer,
    log_uniform: DeviateBuffer,
    config: BufferConfig,
    gamma: GammaCounters,
}

impl BatchRng {
    /// Seeds the engine and prefills every enabled buffer, in the order
    /// uniform, gaussian, exponential, log-uniform.
    pub fn new(seed: u64, config: BufferConfig) -> Result<Self> {
        config.validate()?;
        let mut engine = Engine::new(seed);
        let uniform = DeviateBuffer::new(StandardKind::Uniform, config.uniform_len, &mut engine)?;
        let gaussian = DeviateBuffer::new(StandardKind::Gaussian, config.gaussian_len, &mut engine)?;
        let exponential =
            DeviateBuffer::new(StandardKind::Exponential, config.exponential_len, &mut engine)?;
        let log_uniform =
            DeviateBuffer::new(StandardKind::LogUniform, config.log_uniform_len, &mut engine)?;
        Ok(BatchRng {
            engine,
            uniform,
            gaussian,
            exponential,
            log_uniform,
            config,
            gamma: GammaCounters::default(),
        })
    }

    pub fn with_seed(seed: u64) -> Self {
        BatchRng::new(seed, BufferConfig::default()).expect("default config is valid")
    }

    pub fn config(&self) -> &BufferConfig {
        &self.config
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn buffer(&self, kind: StandardKind) -> &DeviateBuffer {
        match kind {
            StandardKind::Uniform => &self.uniform,
            StandardKind::Gaussian => &self.gaussian,
            StandardKind::Exponential => &self.exponential,
            StandardKind::LogUniform => &self.log_uniform,
        }
    }

    pub fn gamma_counters(&self) -> GammaCounters {
        self.gamma
    }

    pub fn reset_gamma_counters(&mut self) {
        self.gamma = GammaCounters::default();
    }

    #[inline(always)]
    fn std_uniform(&mut self) -> Result<f64, Disabled> {
        self.uniform.take(&mut self.engine)
    }

    #[inline(always)]
    fn std_gaussian(&mut self) -> Result<f64, Disabled> {
        self.gaussian.take(&mut self.engine)
    }

    #[inline(always)]
    fn std_exponential(&mut self) -> Result<f64, Disabled> {
        self.exponential.take(&mut self.engine)
    }

    #[inline(always)]
    fn std_log_uniform(&mut self) -> Result<f64, Disabled> {
        self.log_uniform.take(&mut self.engine)
    }

    /// Uniform on `[a, b)`.
    #[inline(always)]
    pub fn get_uniform(&mut self, a: f64, b: f64) -> Result<f64> {
        check_uniform(a, b)?;
        let u = self.std_uniform()?;
        Ok(uniform_transform(u, a, b))
    }

    /// Normal with mean `mu` and standard deviation `sigma`. A deviate is
    /// consumed even when `sigma == 0`.
    #[inline(always)]
    pub fn get_gaussian(&mut self, mu: f64, sigma: f64) -> Result<f64> {
        check_gaussian(mu, sigma)?;
        let z = self.std_gaussian()?;
        Ok(mu + sigma * z)
    }

    /// Exponential displaced by `a` with scale `beta`.
    #[inline(always)]
    pub fn get_exponential(&mut self, a: f64, beta: f64) -> Result<f64> {
        check_location_scale(a, beta)?;
        let e = self.std_exponential()?;
        Ok(a + beta * e)
    }

    /// `ln` of a uniform on `(0, 1]`; always `<= 0`.
    #[inline(always)]
    pub fn get_log_uniform(&mut self) -> Result<f64> {
        Ok(self.std_log_uniform()?)
    }

    /// Laplace with mean `a` and scale `beta`: one exponential magnitude,
    /// then one uniform for the sign.
    #[inline(always)]
    pub fn get_laplace(&mut self, a: f64, beta: f64) -> Result<f64> {
        check_location_scale(a, beta)?;
        let e = self.std_exponential().map_err(disabled_in("laplace"))?;
        let u = self.std_uniform().map_err(disabled_in("laplace"))?;
        Ok(laplace_transform(e, u, a, beta))
    }

    /// Weibull with shape `alpha`, displacement `a` and scale `beta`.
    #[inline(always)]
    pub fn get_weibull(&mut self, alpha: f64, a: f64, beta: f64) -> Result<f64> {
        check_shape_location_scale(alpha, a, beta)?;
        let e = self.std_exponential().map_err(disabled_in("weibull"))?;
        Ok(weibull_transform(e, alpha, a, beta))
    }

    /// Returns `(d v, log_boost)` with the standard gamma deviate equal to
    /// `d v * exp(log_boost)`.
    #[inline]
    fn gamma_parts(&mut self, setup: &GammaSetup) -> Result<(f64, f64)> {
        let dv = loop {
            let z = self.std_gaussian().map_err(disabled_in("gamma"))?;
            self.gamma.trials += 1;
            if 1.0 + setup.c * z <= 0.0 {
                continue;
            }
            let l = self.std_log_uniform().map_err(disabled_in("gamma"))?;
            let (accept, dv) = setup.trial(z, l);
            if accept {
                self.gamma.accepted += 1;
                break dv;
            }
        };
        let log_boost = match setup.boost_alpha {
            Some(alpha) => self.std_log_uniform().map_err(disabled_in("gamma"))? / alpha,
            None => 0.0,
        };
        Ok((dv, log_boost))
    }

    /// Gamma with shape `alpha`, displacement `a` and scale `beta`, by
    /// Marsaglia–Tsang rejection on buffered normals and log-uniforms.
    /// Shapes below one are boosted from `alpha + 1`.
    #[inline]
    pub fn get_gamma(&mut self, alpha: f64, a: f64, beta: f64) -> Result<f64> {
        check_shape_location_scale(alpha, a, beta)?;
        let setup = GammaSetup::new(alpha);
        let (dv, log_boost) = self.gamma_parts(&setup)?;
        let g = if setup.boost_alpha.is_some() {
            dv * math::exp(log_boost)
        } else {
            dv
        };
        Ok(a + beta * g)
    }

    /// Dirichlet draw into `out` from one unit-scale gamma per component.
    /// Normalization runs in log space so tiny shapes do not underflow the sum.
    pub fn get_dirichlet(&mut self, alphas: &[f64], out: &mut [f64]) -> Result<()> {
        check_dirichlet(alphas)?;
        if out.len() != alphas.len() {
            return Err(invalid(format!(
                "output has {} slots for {} dirichlet components",
                out.len(),
                alphas.len()
            )));
        }
        for (slot, &alpha) in out.iter_mut().zip(alphas) {
            let (dv, log_boost) = self
                .gamma_parts(&GammaSetup::new(alpha))
                .map_err(|e| match e {
                    Error::BufferDisabled { kind, .. } => Error::BufferDisabled {
                        kind,
                        sampler: Some("dirichlet (via gamma)"),
                    },
                    other => other,
                })?;
            *slot = math::ln(dv) + log_boost;
        }
        let max = out.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for x in out.iter_mut() {
            *x = math::exp(*x - max);
            sum += *x;
        }
        for x in out.iter_mut() {
            *x /= sum;
        }
        Ok(())
    }

    /// One draw from a scalar family.
    pub fn sample(&mut self, spec: &DistributionSpec) -> Result<f64> {
        match *spec {
            DistributionSpec::Uniform { a, b } => self.get_uniform(a, b),
            DistributionSpec::Gaussian { mu, sigma } => self.get_gaussian(mu, sigma),
            DistributionSpec::Exponential { a, beta } => self.get_exponential(a, beta),
            DistributionSpec::Laplace { a, beta } => self.get_laplace(a, beta),
            DistributionSpec::Weibull { alpha, a, beta } => self.get_weibull(alpha, a, beta),
            DistributionSpec::Gamma { alpha, a, beta } => self.get_gamma(alpha, a, beta),
            DistributionSpec::Dirichlet { .. } => Err(Error::Unsupported("dirichlet as a scalar draw")),
        }
    }

    // Batch paths: straight from the engine, buffers untouched.

    pub fn get_uniform_batch(&mut self, a: f64, b: f64, out: &mut [f64]) -> Result<()> {
        check_uniform(a, b)?;
        self.engine.fill_uniform(out);
        for x in out.iter_mut() {
            *x = uniform_transform(*x, a, b);
        }
        Ok(())
    }

    /// Odd lengths generate one extra normal and drop it.
    pub fn get_gaussian_batch(&mut self, mu: f64, sigma: f64, out: &mut [f64]) -> Result<()> {
        check_gaussian(mu, sigma)?;
        let even = out.len() & !1;
        self.engine.fill_gaussian(&mut out[..even])?;
        if even < out.len() {
            let mut pair = [0.0; 2];
            self.engine.fill_gaussian(&mut pair)?;
            out[even] = pair[0];
        }
        for x in out.iter_mut() {
            *x = mu + sigma * *x;
        }
        Ok(())
    }

    pub fn get_exponential_batch(&mut self, a: f64, beta: f64, out: &mut [f64]) -> Result<()> {
        check_location_scale(a, beta)?;
        self.engine.fill_exponential(out);
        for x in out.iter_mut() {
            *x = a + beta * *x;
        }
        Ok(())
    }

    pub fn get_laplace_batch(&mut self, a: f64, beta: f64, out: &mut [f64]) -> Result<()> {
        check_location_scale(a, beta)?;
        let mut signs = [0.0; CHUNK];
        for chunk in out.chunks_mut(CHUNK) {
            let signs = &mut signs[..chunk.len()];
            self.engine.fill_exponential(chunk);
            self.engine.fill_uniform(signs);
            for (x, &u) in chunk.iter_mut().zip(signs.iter()) {
                *x = laplace_transform(*x, u, a, beta);
            }
        }
        Ok(())
    }

    pub fn get_weibull_batch(&mut self, alpha: f64, a: f64, beta: f64, out: &mut [f64]) -> Result<()> {
        check_shape_location_scale(alpha, a, beta)?;
        self.engine.fill_exponential(out);
        for x in out.iter_mut() {
            *x = weibull_transform(*x, alpha, a, beta);
        }
        Ok(())
    }

    /// Vectorized rejection: each round draws one normal and one log-uniform
    /// per missing output, evaluates all candidates, and keeps the accepted ones.
    pub fn get_gamma_batch(&mut self, alpha: f64, a: f64, beta: f64, out: &mut [f64]) -> Result<()> {
        check_shape_location_scale(alpha, a, beta)?;
        let setup = GammaSetup::new(alpha);
        let n = out.len();
        let mut z = [0.0; CHUNK];
        let mut log_u = [0.0; CHUNK];
        let mut candidate = [0.0; CHUNK];
        let mut accept = [false; CHUNK];
        let mut filled = 0;
        while filled < n {
            let m = (n - filled).min(CHUNK);
            self.engine.fill_gaussian(&mut z[..(m + 1) & !1])?;
            self.engine.fill_log_uniform(&mut log_u[..m]);
            for j in 0..m {
                let (ok, dv) = setup.trial(z[j], log_u[j]);
                accept[j] = ok;
                candidate[j] = dv;
            }
            let before = filled;
            for j in 0..m {
                if accept[j] {
                    out[filled] = candidate[j];
                    filled += 1;
                }
            }
            self.gamma.trials += m as u64;
            self.gamma.accepted += (filled - before) as u64;
        }
        if let Some(alpha) = setup.boost_alpha {
            let inv = 1.0 / alpha;
            for chunk in out.chunks_mut(CHUNK) {
                let boost = &mut log_u[..chunk.len()];
                self.engine.fill_log_uniform(boost);
                for (x, &l) in chunk.iter_mut().zip(boost.iter()) {
                    *x *= math::exp(l * inv);
                }
            }
        }
        for x in out.iter_mut() {
            *x = a + beta * *x;
        }
        Ok(())
    }

    pub fn sample_batch(&mut self, spec: &DistributionSpec, out: &mut [f64]) -> Result<()> {
        match *spec {
            DistributionSpec::Uniform { a, b } => self.get_uniform_batch(a, b, out),
            DistributionSpec::Gaussian { mu, sigma } => self.get_gaussian_batch(mu, sigma, out),
            DistributionSpec::Exponential { a, beta } => self.get_exponential_batch(a, beta, out),
            DistributionSpec::Laplace { a, beta } => self.get_laplace_batch(a, beta, out),
            DistributionSpec::Weibull { alpha, a, beta } => self.get_weibull_batch(alpha, a, beta, out),
            DistributionSpec::Gamma { alpha, a, beta } => self.get_gamma_batch(alpha, a, beta, out),
            DistributionSpec::Dirichlet { .. } => Err(Error::Unsupported("dirichlet as a scalar batch")),
        }
    }
}
