//! Prefilled batches of standard deviates with a consumption cursor.
//!
//! A buffer is refilled in full from the engine when its cursor reaches the
//! end. Buffers only ever hold standard deviates; parameters are applied by
//! the caller at the take site.

use crate::engine::Engine;
use crate::error::{Error, Result, StandardKind};

pub const DEFAULT_BUFFER_LEN: usize = 1000;

/// Buffer lengths for the four standard streams. A length of zero disables
/// that stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BufferConfig {
    pub uniform_len: usize,
    pub gaussian_len: usize,
    pub exponential_len: usize,
    pub log_uniform_len: usize,
}

impl Default for BufferConfig {
    fn default() -> Self {
        BufferConfig::uniform(DEFAULT_BUFFER_LEN)
    }
}

impl BufferConfig {
    /// The same length for every stream.
    pub fn uniform(len: usize) -> Self {
        BufferConfig {
            uniform_len: len,
            gaussian_len: len,
            exponential_len: len,
            log_uniform_len: len,
        }
    }

    pub fn len_of(&self, kind: StandardKind) -> usize {
        match kind {
            StandardKind::Uniform => self.uniform_len,
            StandardKind::Gaussian => self.gaussian_len,
            StandardKind::Exponential => self.exponential_len,
            StandardKind::LogUniform => self.log_uniform_len,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gaussian_len.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "gaussian_len must be even (normals are generated in pairs), got {}",
                self.gaussian_len
            )));
        }
        Ok(())
    }
}

/// Returned by [`DeviateBuffer::take`] on a zero-length buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Disabled(pub StandardKind);

impl From<Disabled> for Error {
    fn from(d: Disabled) -> Self {
        Error::BufferDisabled {
            kind: d.0,
            sampler: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DeviateBuffer {
    kind: StandardKind,
    values: Box<[f64]>,
    cursor: usize,
    fills: u64,
}

impl DeviateBuffer {
    /// Allocates a buffer of `len` deviates and fills it from `engine`.
    /// `len == 0` produces a disabled buffer and draws nothing.
    pub fn new(kind: StandardKind, len: usize, engine: &mut Engine) -> Result<Self> {
        let mut buf = DeviateBuffer {
            kind,
            values: vec![0.0; len].into_boxed_slice(),
            cursor: 0,
            fills: 0,
        };
        if len > 0 {
            engine.fill(kind, &mut buf.values)?;
            buf.fills = 1;
        }
        Ok(buf)
    }

    pub fn kind(&self) -> StandardKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_disabled(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    /// Number of full fills performed, counting the initial one.
    pub fn fills(&self) -> u64 {
        self.fills
    }

    /// The deviates not yet handed out, in stream order.
    pub fn remaining(&self) -> &[f64] {
        &self.values[self.cursor..]
    }

    /// Next deviate, refilling the whole buffer first if it is exhausted.
    #[inline(always)]
    pub fn take(&mut self, engine: &mut Engine) -> Result<f64, Disabled> {
        let x = match self.values.get(self.cursor) {
            Some(&x) => x,
            None => self.refill(engine)?,
        };
        self.cursor += 1;
        Ok(x)
    }

    /// Refills and returns the first new deviate; the cursor is left at 0.
    #[cold]
    #[inline(never)]
    fn refill(&mut self, engine: &mut Engine) -> Result<f64, Disabled> {
        if self.values.is_empty() {
            return Err(Disabled(self.kind));
        }
        // lengths are validated at construction, so the gaussian fill cannot fail
        engine
            .fill(self.kind, &mut self.values)
            .expect("buffer length validated at construction");
        self.cursor = 0;
        self.fills += 1;
        Ok(self.values[0])
    }

    #[cfg(test)]
    pub(crate) fn set_cursor(&mut self, cursor: usize) {
        assert!(cursor <= self.values.len());
        self.cursor = cursor;
    }
}
