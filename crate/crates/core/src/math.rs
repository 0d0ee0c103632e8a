//! Branch-free elementary functions for the batch kernels.
//!
//! Every function here is straight-line code built from IEEE arithmetic,
//! integer bit manipulation and selects, so a loop calling it over a slice
//! auto-vectorizes. The same code runs for single elements, which keeps batch
//! output and one-at-a-time output bit-identical. Accuracy is within a few
//! ulp of the correctly rounded result over the documented domains.

const LN2_HI: f64 = 6.931_471_803_691_238e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_7e-10;
const LOG2E: f64 = std::f64::consts::LOG2_E;
const SQRT2: f64 = std::f64::consts::SQRT_2;
const TWO54: f64 = 18_014_398_509_481_984.0;
const MANTISSA_MASK: u64 = 0x000f_ffff_ffff_ffff;
const ONE_BITS: u64 = 0x3ff0_0000_0000_0000;

// Largest / smallest arguments for which exp is finite / nonzero.
const EXP_OVERFLOW: f64 = 709.782_712_893_384;
const EXP_UNDERFLOW: f64 = -745.133_219_101_941_1;

/// Natural logarithm for `x >= 0` (zero maps to `-inf`). Negative, NaN and
/// infinite inputs are outside the domain.
#[inline(always)]
pub fn ln(x: f64) -> f64 {
    let tiny = x < f64::MIN_POSITIVE;
    let xs = if tiny { x * TWO54 } else { x };
    let bits = xs.to_bits();
    let bias = if tiny { 1023.0 + 54.0 } else { 1023.0 };

    // m in [sqrt(1/2), sqrt(2))
    let m = f64::from_bits((bits & MANTISSA_MASK) | ONE_BITS);
    let big = m > SQRT2;
    let m = if big { m * 0.5 } else { m };
    let ef = ((bits >> 52) & 0x7ff) as u32 as f64 - bias + if big { 1.0 } else { 0.0 };

    // ln(m) = 2 atanh(s) = 2 (s + s^3/3 + s^5/5 + ...), |s| <= 0.1716
    let s = (m - 1.0) / (m + 1.0);
    let s2 = s * s;
    let s4 = s2 * s2;
    let s8 = s4 * s4;
    let q0 = s2.mul_add(1.0 / 5.0, 1.0 / 3.0);
    let q1 = s2.mul_add(1.0 / 9.0, 1.0 / 7.0);
    let q2 = s2.mul_add(1.0 / 13.0, 1.0 / 11.0);
    let q3 = s2.mul_add(1.0 / 17.0, 1.0 / 15.0);
    let q4 = s2.mul_add(1.0 / 21.0, 1.0 / 19.0);
    let r0 = s4.mul_add(q1, q0);
    let r1 = s4.mul_add(q3, q2);
    let t = s8.mul_add(s8.mul_add(q4, r1), r0);
    let two_s = s + s;
    let r = ef.mul_add(LN2_HI, ef.mul_add(LN2_LO, (two_s * s2).mul_add(t, two_s)));
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        r
    }
}

/// `e^x` for finite `x`, saturating to `+inf` / `0` outside the representable range.
/// `-inf` maps to `0`.
#[inline(always)]
pub fn exp(x: f64) -> f64 {
    #[allow(clippy::manual_clamp)] // NaN must not propagate into the integer conversion
    let k = (x * LOG2E).round_ties_even().max(-1100.0).min(1100.0);
    let ki = k as i64;
    // k * LN2_HI is exact for |k| < 2^11
    let r = k.mul_add(-LN2_LO, k.mul_add(-LN2_HI, x));
    let r2 = r * r;
    let r4 = r2 * r2;
    let r8 = r4 * r4;
    let q0 = r.mul_add(1.0, 1.0);
    let q1 = r.mul_add(1.0 / 6.0, 1.0 / 2.0);
    let q2 = r.mul_add(1.0 / 120.0, 1.0 / 24.0);
    let q3 = r.mul_add(1.0 / 5040.0, 1.0 / 720.0);
    let q4 = r.mul_add(1.0 / 362_880.0, 1.0 / 40320.0);
    let q5 = r.mul_add(1.0 / 39_916_800.0, 1.0 / 3_628_800.0);
    let q6 = r.mul_add(1.0 / 6_227_020_800.0, 1.0 / 479_001_600.0);
    let u0 = r2.mul_add(q1, q0);
    let u1 = r2.mul_add(q3, q2);
    let u2 = r2.mul_add(q5, q4);
    let v1 = r4.mul_add(q6, u2);
    let p = r8.mul_add(v1, r4.mul_add(u1, u0));
    // 2^k split in two factors so both stay normal over the whole clamp range
    let k1 = ki >> 1;
    let k2 = ki - k1;
    let s1 = f64::from_bits(((k1 + 1023) as u64) << 52);
    let s2 = f64::from_bits(((k2 + 1023) as u64) << 52);
    let y = p * s1 * s2;
    if x > EXP_OVERFLOW {
        f64::INFINITY
    } else if x < EXP_UNDERFLOW {
        0.0
    } else {
        y
    }
}

/// `(sin(2πu), cos(2πu))` for `u` in `[0, 1]`. The quadrant reduction is exact,
/// so `u = 0` gives exactly `(0, 1)`.
#[inline(always)]
pub fn sin_cos_turns(u: f64) -> (f64, f64) {
    let q = (u * 4.0).round_ties_even();
    let r = q.mul_add(-0.25, u);
    let x = r * std::f64::consts::TAU;
    let x2 = x * x;
    let x4 = x2 * x2;
    let x8 = x4 * x4;

    let a0 = x2.mul_add(1.0 / 120.0, -1.0 / 6.0);
    let a1 = x2.mul_add(1.0 / 362_880.0, -1.0 / 5040.0);
    let a2 = x2.mul_add(1.0 / 6_227_020_800.0, -1.0 / 39_916_800.0);
    let a3 = x2.mul_add(1.0 / 355_687_428_096_000.0, -1.0 / 1_307_674_368_000.0);
    let sp = x8.mul_add(x4.mul_add(a3, a2), x4.mul_add(a1, a0));
    let s = (x * x2).mul_add(sp, x);

    let b0 = x2.mul_add(1.0 / 24.0, -1.0 / 2.0);
    let b1 = x2.mul_add(1.0 / 40320.0, -1.0 / 720.0);
    let b2 = x2.mul_add(1.0 / 479_001_600.0, -1.0 / 3_628_800.0);
    let b3 = x2.mul_add(1.0 / 20_922_789_888_000.0, -1.0 / 87_178_291_200.0);
    let b4 = -1.0 / 6_402_373_705_728_000.0;
    let cp = x8.mul_add(x8.mul_add(b4, x4.mul_add(b3, b2)), x4.mul_add(b1, b0));
    let c = x2.mul_add(cp, 1.0);

    let qi = q as i64;
    let swap = qi & 1 != 0;
    let sv = if swap { c } else { s };
    let cv = if swap { s } else { c };
    let sin = if qi & 2 != 0 { -sv } else { sv };
    let cos = if (qi + 1) & 2 != 0 { -cv } else { cv };
    (sin, cos)
}

/// `x^p` for `x >= 0` via `exp(p ln x)`; `0^p = 0` for `p > 0`.
#[inline(always)]
pub fn pow_nonneg(x: f64, p: f64) -> f64 {
    exp(p * ln(x))
}
