//! Exact fractional parts of products, for polynomial phases mod 1.
//!
//! Evaluating `e(alpha * n^3)` for `n` up to 2*10^5 requires the phase
//! `alpha * n^3 mod 1` to better than 1e-12 while the product itself is of
//! order 1e15. A plain `f64` multiply rounds at the integer scale —
//! `ulp(alpha * n^3) ~ 1` — which destroys the fractional part entirely.
//! The cure is an error-free transformation: Dekker's two-product via
//! Veltkamp splitting represents `a * b` exactly as `hi + err` with `hi`
//! the rounded product and `err` the rounding error, and the fractional
//! part is recovered from both pieces. No `fma` hardware is assumed.
//!
//! An incremental recurrence for `alpha * n^3` (third differences) was
//! rejected: its rounding error grows like `n^3 * eps / 6`, which is ~0.15
//! by `n = 2 * 10^5` — worse than useless for a phase.

/// Veltkamp splitting constant for f64: `2^27 + 1`.
const SPLITTER: f64 = 134_217_729.0;

/// Split `a` into `hi + lo` with both halves having at most 26-27
/// significant bits, so products of halves are exact in f64.
#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

/// Dekker two-product: returns `(p, err)` with `p = fl(a*b)` and
/// `a*b = p + err` exactly (barring overflow, which our magnitudes avoid).
#[inline]
fn two_product(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ahi, alo) = split(a);
    let (bhi, blo) = split(b);
    let err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
    (p, err)
}

/// Fractional part of `a * b` in `[0, 1)`, accurate to a few ulp of 1,
/// valid for `a >= 0` and integer-valued `b >= 0` with `a * b` well below
/// the f64 overflow threshold.
#[inline]
pub fn fract_mul(a: f64, b: f64) -> f64 {
    let (p, err) = two_product(a, b);
    // p's fractional part is exact (p >= 0), and err is a small correction.
    let f = p - p.floor() + err;
    f - f.floor()
}

/// Fractional part of `a * n` for `a` in `[0, 1)` and arbitrary `n: u128`,
/// in `[0, 1)`. Uses the direct product when `n` fits the exact-f64 range;
/// otherwise decomposes `n` into 32-bit limbs and accumulates
/// `frac(a * 2^(32k)) * limb_k`, each limb product handled exactly.
pub fn fract_mul_u128(a: f64, n: u128) -> f64 {
    debug_assert!((0.0..1.0).contains(&a));
    if n < (1u128 << 53) {
        return fract_mul(a, n as f64);
    }
    // a_k = frac(a * 2^(32k)): multiplying an f64 by 2^32 is exact, and
    // subtracting the floor of a value below 2^32 is exact as well, so the
    // iteration is error-free.
    let mut ak = a;
    let mut acc = 0.0f64;
    let mut rest = n;
    while rest > 0 {
        let limb = (rest & 0xFFFF_FFFF) as f64;
        if limb != 0.0 {
            acc += fract_mul(ak, limb);
            acc -= acc.floor();
        }
        rest >>= 32;
        let t = ak * 4_294_967_296.0;
        ak = t - t.floor();
    }
    acc
}

/// Fractional part of `c * n` for signed multiplier `c` (any magnitude)
/// and `n: u64`, in `[0, 1)`.
pub fn fract_mul_signed(c: f64, n: u64) -> f64 {
    let f = fract_mul(c.abs(), n as f64);
    if c >= 0.0 {
        f
    } else {
        let g = 1.0 - f;
        g - g.floor() // maps f = 0 back to 0
    }
}

/// `e(t) = exp(2 pi i t)` as `(re, im)`.
#[inline]
pub fn unit(t: f64) -> (f64, f64) {
    let (s, c) = (std::f64::consts::TAU * t).sin_cos();
    (c, s)
}
