//! Gibbs sampler for the uniform density on the triangle `x > 0, y > 0,
//! x + y < 1`. Each conditional is uniform, so every iteration makes two
//! one-at-a-time uniform draws whose upper bound depends on the other
//! coordinate.

use crate::error::{Error, Result};
use crate::sampler::BatchRng;

pub const START: (f64, f64) = (0.5, 0.5);
pub const BURN_IN: usize = 1000;

/// Runs `n` iterations from [`START`] and returns every state.
pub fn gibbs_triangle(rng: &mut BatchRng, n: usize) -> Result<Vec<(f64, f64)>> {
    let mut y = START.1;
    let mut chain = Vec::with_capacity(n);
    for _ in 0..n {
        let x = rng.get_uniform(0.0, 1.0 - y)?;
        y = rng.get_uniform(0.0, 1.0 - x)?;
        chain.push((x, y));
    }
    Ok(chain)
}

pub fn in_open_triangle(x: f64, y: f64) -> bool {
    x > 0.0 && y > 0.0 && x + y < 1.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSummary {
    pub n: usize,
    pub mean_x: f64,
    pub mean_y: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub cov_xy: f64,
    /// Number of states strictly inside the triangle.
    pub inside: usize,
}

/// Two-pass means, unbiased variances and covariance.
pub fn summarize(pairs: &[(f64, f64)]) -> Result<TriangleSummary> {
    let n = pairs.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let nf = n as f64;
    let mean_x = pairs.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = pairs.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    Ok(TriangleSummary {
        n,
        mean_x,
        mean_y,
        var_x: sxx / (nf - 1.0),
        var_y: syy / (nf - 1.0),
        cov_xy: sxy / (nf - 1.0),
        inside: pairs.iter().filter(|&&(x, y)| in_open_triangle(x, y)).count(),
    })
}
