use std::fmt;

use thiserror::Error;

/// The four standard-deviate streams that can be buffered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StandardKind {
    Uniform,
    Gaussian,
    Exponential,
    LogUniform,
}

impl StandardKind {
    pub const ALL: [StandardKind; 4] = [
        StandardKind::Uniform,
        StandardKind::Gaussian,
        StandardKind::Exponential,
        StandardKind::LogUniform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StandardKind::Uniform => "uniform",
            StandardKind::Gaussian => "gaussian",
            StandardKind::Exponential => "exponential",
            StandardKind::LogUniform => "log_uniform",
        }
    }
}

impl fmt::Display for StandardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gaussian batches are generated in pairs; odd length {len} requested")]
    OddBatch { len: usize },

    #[error("{}", disabled_message(*.kind, *.sampler))]
    BufferDisabled {
        kind: StandardKind,
        /// The sampler that needed the buffer, when it is not the buffer's own family.
        sampler: Option<&'static str>,
    },

    #[error("invalid buffer configuration: {0}")]
    InvalidConfig(String),

    #[error("{0}")]
    InvalidParams(String),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("n = {n} is too small for a benchmark run (minimum {min})")]
    TooSmallN { n: usize, min: usize },

    #[error("{0} is not supported here")]
    Unsupported(&'static str),
}

fn disabled_message(kind: StandardKind, sampler: Option<&'static str>) -> String {
    match sampler {
        Some(s) => format!(
            "the {s} sampler depends on the {kind} buffer, which is disabled (length 0)"
        ),
        None => format!("the {kind} buffer is disabled (length 0)"),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
