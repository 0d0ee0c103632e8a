//! The core engine: a deterministic generator that fills caller-provided
//! slices with standard deviates.
//!
//! The generator is eight independent xoshiro256+ lanes stored
//! struct-of-arrays, so one step of all lanes is a handful of vector
//! instructions. Element `k` of the stream comes from lane `k % LANES`; the
//! engine tracks its stream position, which makes every fill independent of
//! how the caller chunks its requests. Doubles use the top 53 bits of each
//! raw word, mapped to `[0, 1)`.
//!
//! Gaussian, exponential and log-uniform fills draw uniforms first and then
//! transform them in place, chunk by chunk, with the kernels in [`crate::math`].

use crate::error::{Error, Result, StandardKind};
use crate::math;

/// Number of interleaved generator lanes.
pub const LANES: usize = 8;

// Uniforms are drawn and transformed in cache-resident chunks of this size.
const CHUNK: usize = 512;

const UNIT_SCALE: f64 = 1.0 / (1u64 << 53) as f64;

#[inline(always)]
fn to_unit(r: u64) -> f64 {
    (r >> 11) as f64 * UNIT_SCALE
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Standard normal pair from two uniforms (cartesian Box–Muller):
/// `r = sqrt(-2 ln(1 - u1))`, returns `(r cos 2πu2, r sin 2πu2)`.
#[inline(always)]
pub fn box_muller(u1: f64, u2: f64) -> (f64, f64) {
    let r = (-2.0 * math::ln(1.0 - u1)).sqrt();
    let (s, c) = math::sin_cos_turns(u2);
    (r * c, r * s)
}

/// `-ln(1 - u)`.
#[inline(always)]
pub fn exponential_from_uniform(u: f64) -> f64 {
    0.0 - math::ln(1.0 - u)
}

/// `ln(1 - u)`.
#[inline(always)]
pub fn log_uniform_from_uniform(u: f64) -> f64 {
    math::ln(1.0 - u)
}

/// One xoshiro256+ step of every lane. Each statement is its own loop over
/// the lanes so it maps onto whole-vector instructions.
#[inline(always)]
fn step_all(s: &mut [[u64; LANES]; 4]) -> [u64; LANES] {
    let [s0, s1, s2, s3] = s;
    let mut r = [0u64; LANES];
    let mut t = [0u64; LANES];
    for j in 0..LANES {
        r[j] = s0[j].wrapping_add(s3[j]);
    }
    for j in 0..LANES {
        t[j] = s1[j] << 17;
    }
    for j in 0..LANES {
        s2[j] ^= s0[j];
    }
    for j in 0..LANES {
        s3[j] ^= s1[j];
    }
    for j in 0..LANES {
        s1[j] ^= s2[j];
    }
    for j in 0..LANES {
        s0[j] ^= s3[j];
    }
    for j in 0..LANES {
        s2[j] ^= t[j];
    }
    for x in s3.iter_mut() {
        *x = x.rotate_left(45);
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Engine {
    seed: u64,
    s: [[u64; LANES]; 4],
    position: u64,
}

impl Engine {
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        let mut s = [[0u64; LANES]; 4];
        for lane in 0..LANES {
            for word in s.iter_mut() {
                word[lane] = splitmix64(&mut sm);
            }
            // the all-zero state is a fixed point of xoshiro
            if s.iter().all(|w| w[lane] == 0) {
                s[0][lane] = 0x9e37_79b9_7f4a_7c15;
            }
        }
        Engine { seed, s, position: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of uniforms drawn so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    #[inline(always)]
    fn step_lane(&mut self, lane: usize) -> u64 {
        let [s0, s1, s2, s3] = &mut self.s;
        let r = s0[lane].wrapping_add(s3[lane]);
        let t = s1[lane] << 17;
        s2[lane] ^= s0[lane];
        s3[lane] ^= s1[lane];
        s1[lane] ^= s2[lane];
        s0[lane] ^= s3[lane];
        s2[lane] ^= t;
        s3[lane] = s3[lane].rotate_left(45);
        r
    }

    /// Next raw 64-bit word of the stream.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let lane = (self.position % LANES as u64) as usize;
        self.position += 1;
        self.step_lane(lane)
    }

    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        to_unit(self.next_u64())
    }

    #[inline(always)]
    fn fill_uniform_inner(&mut self, out: &mut [f64]) {
        let n = out.len();
        let mut i = 0;
        while i < n && !self.position.is_multiple_of(LANES as u64) {
            out[i] = self.next_uniform();
            i += 1;
        }

        let mut blocks = out[i..].chunks_exact_mut(LANES);
        let mut stepped = 0u64;
        for block in &mut blocks {
            let r = step_all(&mut self.s);
            for j in 0..LANES {
                block[j] = to_unit(r[j]);
            }
            stepped += LANES as u64;
        }
        self.position += stepped;

        for x in blocks.into_remainder() {
            *x = self.next_uniform();
        }
    }

    /// Fills `out` with standard uniforms in `[0, 1)`.
    #[inline(never)]
    pub fn fill_uniform(&mut self, out: &mut [f64]) {
        self.fill_uniform_inner(out);
    }

    /// Fills `out` with standard normals, two per uniform pair. `out.len()` must be even.
    #[inline(never)]
    pub fn fill_gaussian(&mut self, out: &mut [f64]) -> Result<()> {
        if !out.len().is_multiple_of(2) {
            return Err(Error::OddBatch { len: out.len() });
        }
        for chunk in out.chunks_mut(CHUNK) {
            self.fill_uniform_inner(chunk);
            let mut groups = chunk.chunks_exact_mut(2 * LANES);
            for g in &mut groups {
                let mut u1 = [0.0; LANES];
                let mut u2 = [0.0; LANES];
                for j in 0..LANES {
                    u1[j] = g[2 * j];
                    u2[j] = g[2 * j + 1];
                }
                for j in 0..LANES {
                    let (z1, z2) = box_muller(u1[j], u2[j]);
                    g[2 * j] = z1;
                    g[2 * j + 1] = z2;
                }
            }
            for pair in groups.into_remainder().chunks_exact_mut(2) {
                let (z1, z2) = box_muller(pair[0], pair[1]);
                pair[0] = z1;
                pair[1] = z2;
            }
        }
        Ok(())
    }

    /// Fills `out` with standard exponentials `-ln(1 - u)`.
    #[inline(never)]
    pub fn fill_exponential(&mut self, out: &mut [f64]) {
        for chunk in out.chunks_mut(CHUNK) {
            self.fill_uniform_inner(chunk);
            for x in chunk.iter_mut() {
                *x = exponential_from_uniform(*x);
            }
        }
    }

    /// Fills `out` with `ln(1 - u)`, i.e. the log of a uniform on `(0, 1]`.
    #[inline(never)]
    pub fn fill_log_uniform(&mut self, out: &mut [f64]) {
        for chunk in out.chunks_mut(CHUNK) {
            self.fill_uniform_inner(chunk);
            for x in chunk.iter_mut() {
                *x = log_uniform_from_uniform(*x);
            }
        }
    }

    pub fn fill(&mut self, kind: StandardKind, out: &mut [f64]) -> Result<()> {
        match kind {
            StandardKind::Uniform => self.fill_uniform(out),
            StandardKind::Gaussian => self.fill_gaussian(out)?,
            StandardKind::Exponential => self.fill_exponential(out),
            StandardKind::LogUniform => self.fill_log_uniform(out),
        }
        Ok(())
    }
}
