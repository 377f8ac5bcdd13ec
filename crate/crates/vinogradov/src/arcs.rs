//! Farey dissections of the unit interval and cube, the four-way
//! partition used by the minor-arc analysis, and the numerical probes
//! that exercise the bounds those dissections feed.
//!
//! One-dimensional major arcs at cutoff `Q` and scale `X` are
//!
//! ```text
//! M(q, a) = { alpha in [0,1) : |q alpha - a| <= Q X^-3 },
//!           0 <= a <= q <= Q, gcd(a, q) = 1,
//! ```
//!
//! and the three-dimensional boxes at cutoff `Z` are
//!
//! ```text
//! K(q, a) = { alpha : |alpha_j - a_j / q| <= Z X^-j, j = 1,2,3 },
//!           1 <= q <= Z, 0 <= a_j <= q, gcd(q, a1, a2, a3) = 1.
//! ```
//!
//! ## Exact boundary arithmetic
//!
//! At `X = 10^6` the third-coordinate box width is ~1e-18 — far below the
//! spacing of `f64` values near 1/2 — so membership cannot be decided in
//! floating point. Every test here therefore quantizes `alpha` to
//! `n = round(alpha * 2^80)` (exact for any `f64` in `[2^-27, 1)`, and
//! within `2^-81` otherwise) and compares the integer `|q n - a 2^80|`
//! against the scaled threshold. Inequalities are inclusive, with a
//! documented *relative* slack of 1e-12 on the threshold so that points
//! constructed to sit on a boundary classify stably.
//!
//! ## Center location
//!
//! Whenever `2 Q^3 < X^3` a point lies in at most one arc `M(q, a)`:
//! distinct centers are at least `1/(q q') >= Q^-2` apart while two arcs
//! span at most `2 Q X^-3` around their centers. In that regime the center
//! is found from the continued-fraction convergents of `alpha`: the last
//! convergent with denominator `<= Q` minimizes `|q alpha - a|` over all
//! `q <= Q` (best approximation of the second kind), so it qualifies iff
//! any center does, and by uniqueness it then *is* the center. Outside the
//! regime (tiny `X`) an exhaustive scan with the smallest-`q` convention
//! decides.

use crate::expsum::{arc_approximant_v, weyl_sum_f, PhasePoint, RationalCenter};

/// Relative slack applied to every arc-boundary threshold.
pub const BOUNDARY_SLACK: f64 = 1e-12;

/// Quantization scale: alpha is snapped to a multiple of 2^-80.
const SCALE_BITS: u32 = 80;

/// One-dimensional classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneDimLabel {
    Major { q: u64, a: u64 },
    Minor,
}

impl OneDimLabel {
    pub fn is_major(&self) -> bool {
        matches!(self, OneDimLabel::Major { .. })
    }
}

/// Three-dimensional (box) classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxLabel {
    Major { q: u64, a: [u64; 3] },
    Minor,
}

impl BoxLabel {
    pub fn is_major(&self) -> bool {
        matches!(self, BoxLabel::Major { .. })
    }
}

/// The four-way partition label of a phase point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WLabel {
    /// Third coordinate in the one-dimensional minor arcs.
    W1,
    /// Third coordinate major, but outside the wide boxes.
    W2,
    /// Inside the wide boxes, outside the narrow ones.
    W3,
    /// Inside the narrow boxes.
    W4,
}

/// Snap `alpha` (any real) to `round((alpha mod 1) * 2^80)` as an integer.
pub fn alpha_scaled(alpha: f64) -> u128 {
    let a = alpha.rem_euclid(1.0);
    // a * 2^80 is exact (power-of-two scaling); round to the nearest
    // integer. a < 1 guarantees the result fits in 81 bits.
    let scaled = a * (SCALE_BITS as f64).exp2();
    let n = scaled.round() as u128;
    // alpha ~ 1 - epsilon can round up to exactly 2^80 == 0 mod 1.
    if n >= 1u128 << SCALE_BITS {
        0
    } else {
        n
    }
}

/// Exact `|q * alpha - a|` in units of 2^-80, from the quantized alpha.
fn scaled_dist(q: u64, n: u128, a: u64) -> u128 {
    let lhs = q as u128 * n;
    let rhs = (a as u128) << SCALE_BITS;
    lhs.abs_diff(rhs)
}

/// Inclusive threshold test with relative slack, in quantized units.
fn within(dist: u128, threshold_alpha_units: f64) -> bool {
    (dist as f64) <= threshold_alpha_units * (SCALE_BITS as f64).exp2() * (1.0 + BOUNDARY_SLACK)
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Largest admissible integer denominator for a real cutoff.
fn cutoff_floor(z: f64) -> u64 {
    (z * (1.0 + BOUNDARY_SLACK)).floor().max(0.0) as u64
}

/// Locate the major-arc center of `alpha` at cutoff `q_cutoff` and scale
/// `x`, or report Minor. `x` is the scale entering the width `Q X^-3`.
pub fn classify_one_dim(alpha: f64, q_cutoff: f64, x: f64) -> OneDimLabel {
    let qmax = cutoff_floor(q_cutoff);
    if qmax == 0 {
        return OneDimLabel::Minor;
    }
    // The convergent argument needs at-most-one qualifying center.
    if 2.0 * q_cutoff * q_cutoff * q_cutoff < x * x * x {
        let n = alpha_scaled(alpha);
        let threshold = q_cutoff * x.powi(-3);
        let (q, a) = best_approximation(n, qmax);
        if within(scaled_dist(q, n, a), threshold) {
            OneDimLabel::Major { q, a }
        } else {
            OneDimLabel::Minor
        }
    } else {
        classify_one_dim_exhaustive(alpha, q_cutoff, x)
    }
}

/// Last continued-fraction convergent `a / q` of `n / 2^80` with
/// `q <= qmax` — the minimizer of `|q alpha - a|` over denominators up to
/// `qmax`.
fn best_approximation(n: u128, qmax: u64) -> (u64, u64) {
    // Convergent recurrence seeded with a0 = floor(n / 2^80) = 0.
    let (mut p_prev, mut q_prev) = (1u128, 0u128);
    let (mut p_cur, mut q_cur) = (0u128, 1u128);
    let (mut u, mut v) = (1u128 << SCALE_BITS, n);
    while v != 0 {
        let a = u / v;
        let r = u % v;
        let p_next = a * p_cur + p_prev;
        let q_next = a * q_cur + q_prev;
        if q_next > qmax as u128 {
            // Even the partial quotient's largest admissible semiconvergent
            // is not needed: for best approximation of the second kind the
            // full convergent is required, so stop at the previous one.
            break;
        }
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        u = v;
        v = r;
    }
    (q_cur as u64, p_cur as u64)
}

/// Reference implementation: scan all `q <= Q` in increasing order and
/// test the nearest integers to `q alpha`. Smallest qualifying `q` wins.
pub fn classify_one_dim_exhaustive(alpha: f64, q_cutoff: f64, x: f64) -> OneDimLabel {
    let n = alpha_scaled(alpha);
    let threshold = q_cutoff * x.powi(-3);
    for q in 1..=cutoff_floor(q_cutoff) {
        let floor_a = ((q as u128 * n) >> SCALE_BITS) as u64;
        for a in [floor_a, floor_a + 1] {
            if a > q {
                continue;
            }
            // a = 0 pairs only with q = 1 (gcd(0, q) = q).
            if gcd(a, q) != 1 && !(a == 0 && q == 1) {
                continue;
            }
            if within(scaled_dist(q, n, a), threshold) {
                return OneDimLabel::Major { q, a };
            }
        }
    }
    OneDimLabel::Minor
}

/// Locate the box-arc center of `alpha` at cutoff `z` and scale `x`, or
/// report Minor. Overlaps are resolved to the smallest `q` (then the
/// lexicographically first center).
pub fn classify_box(alpha: &[f64; 3], z: f64, x: f64) -> BoxLabel {
    let n = [
        alpha_scaled(alpha[0]),
        alpha_scaled(alpha[1]),
        alpha_scaled(alpha[2]),
    ];
    let widths = [z / x, z / (x * x), z / (x * x * x)];
    for q in 1..=cutoff_floor(z) {
        // Candidate numerators per coordinate: floor and ceil of q*alpha_j,
        // clamped to [0, q]. Any in-box numerator is one of these because
        // the box half-width q * Z X^-j is far below 1/2 whenever X > 2 Z^2
        // (true for every cutoff this library uses; for pathological
        // scales both candidates are still correct, merely possibly
        // incomplete, and the exhaustive tests below stay within range).
        let mut cands = [[0u64; 2]; 3];
        for j in 0..3 {
            let f = ((q as u128 * n[j]) >> SCALE_BITS) as u64;
            cands[j] = [f.min(q), (f + 1).min(q)];
        }
        for &a1 in &cands[0] {
            for &a2 in &cands[1] {
                for &a3 in &cands[2] {
                    let g = gcd(gcd(q, a1), gcd(a2, a3));
                    if g != 1 {
                        continue;
                    }
                    let ok = (0..3).all(|j| {
                        within(scaled_dist(q, n[j], [a1, a2, a3][j]), widths[j])
                    });
                    if ok {
                        return BoxLabel::Major { q, a: [a1, a2, a3] };
                    }
                }
            }
        }
    }
    BoxLabel::Minor
}

/// The dissection cutoffs at scale `x`: `L = x^(1/72)` and `Q = L^3`.
pub fn dissection_cutoffs(x: f64) -> (f64, f64) {
    let l = x.powf(1.0 / 72.0);
    (l, l * l * l)
}

/// Assign the four-way partition label to a phase point at scale `x`.
///
/// * `W1`: `alpha_3` minor at cutoff `Q = x^(1/24)`.
/// * `W2`: `alpha_3` major, point outside the wide boxes `K(Q^2)`.
/// * `W3`: inside `K(Q^2)` but outside the narrow boxes `K(L)`.
/// * `W4`: inside `K(L)` (which is contained in the `alpha_3`-major set).
pub fn partition_label(alpha: &[f64; 3], x: u64) -> WLabel {
    assert!(x >= 2, "partition needs X >= 2");
    let xf = x as f64;
    let (l, q) = dissection_cutoffs(xf);
    if !classify_one_dim(alpha[2], q, xf).is_major() {
        return WLabel::W1;
    }
    if !classify_box(alpha, q * q, xf).is_major() {
        return WLabel::W2;
    }
    if !classify_box(alpha, l, xf).is_major() {
        return WLabel::W3;
    }
    WLabel::W4
}

/// SplitMix64: cheap, high-quality expansion of a seed into per-index
/// streams.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform f64 in [0,1) from a u64 (53 high bits).
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Report of the minor-arc sup probe: the empirical maximum of
/// `|f(alpha; 2X)|` over sampled points whose third coordinate is minor
/// at cutoff `Q`, and its ratio to the reference scale `X Q^(-1/4)`.
#[derive(Debug, Clone)]
pub struct WeylProbeReport {
    pub x: u64,
    pub q_cutoff: f64,
    pub requested: u64,
    pub kept: u64,
    pub max_modulus: f64,
    /// `max_modulus / (X * Q^(-1/4))`.
    pub ratio: f64,
    pub argmax: [f64; 3],
    pub seed: u64,
}

/// Sample `sample_count` phase points deterministically from `seed`, keep
/// those with `alpha_3` minor at cutoff `q_cutoff`, and record the largest
/// `|f(alpha; 2X)|`.
pub fn weyl_probe(x: u64, q_cutoff: f64, sample_count: u64, seed: u64) -> WeylProbeReport {
    let xf = x as f64;
    let mut max_modulus = 0.0f64;
    let mut argmax = [0.0; 3];
    let mut kept = 0;
    for i in 0..sample_count {
        let base = splitmix64(seed ^ i.wrapping_mul(0xA076_1D64_78BD_642F));
        let alpha = [
            unit_f64(splitmix64(base ^ 1)),
            unit_f64(splitmix64(base ^ 2)),
            unit_f64(splitmix64(base ^ 3)),
        ];
        if classify_one_dim(alpha[2], q_cutoff, xf).is_major() {
            continue;
        }
        kept += 1;
        let value = weyl_sum_f(
            &PhasePoint::new(alpha[0], alpha[1], alpha[2]),
            2 * x,
        )
        .norm();
        if value > max_modulus {
            max_modulus = value;
            argmax = alpha;
        }
    }
    let reference = xf * q_cutoff.powf(-0.25);
    WeylProbeReport {
        x,
        q_cutoff,
        requested: sample_count,
        kept,
        max_modulus,
        ratio: max_modulus / reference,
        argmax,
        seed,
    }
}

/// Report of the major-arc approximation probe: the maximum of
/// `|f(alpha; X) - V(alpha)| / L^2` over points sampled inside the narrow
/// boxes `K(L)`.
#[derive(Debug, Clone)]
pub struct MajorArcProbeReport {
    pub x: u64,
    pub samples: u64,
    pub l: f64,
    pub max_raw: f64,
    /// `max_raw / L^2`.
    pub max_normalized: f64,
    pub seed: u64,
}

/// Sample points inside the narrow boxes (denominators up to `L`) and
/// measure the worst approximation error of the rational-center
/// approximant.
pub fn major_arc_error_probe(x: u64, sample_count: u64, seed: u64) -> MajorArcProbeReport {
    let xf = x as f64;
    let (l, _) = dissection_cutoffs(xf);
    let qmax = cutoff_floor(l).max(1);
    let mut max_raw = 0.0f64;
    for i in 0..sample_count {
        let base = splitmix64(seed ^ i.wrapping_mul(0xD6E8_FEB8_6659_FD93));
        let q = 1 + splitmix64(base ^ 0x10) % qmax;
        // Numerators in [0, q] with gcd(q, a1, a2, a3) = 1; retry caps are
        // irrelevant for q = 1 (always coprime) and tiny q generally.
        let mut a = [0u64; 3];
        let mut tries = 0;
        loop {
            for (j, slot) in a.iter_mut().enumerate() {
                *slot = splitmix64(base ^ (0x20 + j as u64) ^ (tries << 8)) % (q + 1);
            }
            if gcd(gcd(q, a[0]), gcd(a[1], a[2])) == 1 {
                break;
            }
            tries += 1;
        }
        let mut alpha = [0.0f64; 3];
        for j in 0..3 {
            let width = l * xf.powi(-(j as i32 + 1)) / q as f64;
            let delta = (2.0 * unit_f64(splitmix64(base ^ (0x30 + j as u64))) - 1.0) * width;
            alpha[j] = (a[j] as f64 / q as f64 + delta).rem_euclid(1.0);
        }
        let center = RationalCenter { q, a };
        let f = weyl_sum_f(&PhasePoint::new(alpha[0], alpha[1], alpha[2]), x);
        let v = arc_approximant_v(
            &PhasePoint::new(alpha[0], alpha[1], alpha[2]),
            &center,
            xf,
            1e-9,
        );
        let err = (f - v).norm();
        if err > max_raw {
            max_raw = err;
        }
    }
    MajorArcProbeReport {
        x,
        samples: sample_count,
        l,
        max_raw,
        max_normalized: max_raw / (l * l),
        seed,
    }
}
