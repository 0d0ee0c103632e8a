//! Buffered random deviates.
//!
//! Vectorized generators are fast when asked for thousands of deviates with
//! fixed parameters and slow when called once per draw. Markov chain samplers
//! need the second pattern: one draw at a time, with parameters that change
//! every iteration. [`BatchRng`] bridges the two by keeping prefilled buffers
//! of *standard* deviates and applying each call's parameters at the take
//! site, so the generation cost stays batch-sized.
//!
//! ```
//! use batchrng::BatchRng;
//!
//! let mut rng = BatchRng::with_seed(7);
//! let (mut x, mut y) = (0.5, 0.5);
//! for _ in 0..1000 {
//!     x = rng.get_uniform(0.0, 1.0 - y).unwrap();
//!     y = rng.get_uniform(0.0, 1.0 - x).unwrap();
//! }
//! assert!(x > 0.0 && y > 0.0 && x + y < 1.0);
//! ```

pub mod bench;
pub mod buffer;
pub mod engine;
pub mod error;
pub mod gibbs;
pub mod math;
pub mod sampler;
pub mod stats;

pub use buffer::{BufferConfig, DeviateBuffer, DEFAULT_BUFFER_LEN};
pub use engine::Engine;
pub use error::{Error, Result, StandardKind};
pub use sampler::{BatchRng, DistributionSpec, Family, GammaCounters};
pub use stats::{KsResult, MomentSummary};
