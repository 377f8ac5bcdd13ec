//! Exponential-sum and oscillatory-integral evaluators.
//!
//! The central object is the cubic Weyl sum
//!
//! ```text
//! f(alpha; X) = sum_{1 <= x <= X} e(alpha_1 x + alpha_2 x^2 + alpha_3 x^3),
//! ```
//!
//! together with its rational companions: the complete sum
//! `S(q, a) = sum_{r=1}^{q} e_q(a_1 r + a_2 r^2 + a_3 r^3)`, the scaled
//! integral `I(beta; X) = X * I(beta_1 X, beta_2 X^2, beta_3 X^3)`, and the
//! major-arc approximant `V(alpha) = q^-1 S(q, a) I(alpha - a/q; X)`.
//!
//! Phases are reduced to `[0, 1)` *before* multiplication by `x^j` using
//! the exact product splitting in [`phase`]; see that module for why naive
//! `f64` phase accumulation is not acceptable at `X ~ 10^6`.

mod phase;
mod quad;

pub use phase::unit as unit_phase;
pub use quad::{oscillatory_i, QuadResult};

use num_complex::Complex64;

use crate::arcs::{classify_one_dim, OneDimLabel};
use crate::domain::Offset;
use crate::error::{Error, Result};
use phase::{fract_mul, fract_mul_signed, fract_mul_u128, unit};

/// A point of the phase cube. Coordinates may be any reals; evaluators
/// reduce them mod 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl PhasePoint {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Self {
        Self { a1, a2, a3 }
    }

    /// The representative with every coordinate in `[0, 1)`.
    pub fn reduced(&self) -> Self {
        Self {
            a1: self.a1.rem_euclid(1.0),
            a2: self.a2.rem_euclid(1.0),
            a3: self.a3.rem_euclid(1.0),
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a1, self.a2, self.a3]
    }
}

/// A rational center `a / q` of a major arc: `q >= 1`, `0 <= a_j <= q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalCenter {
    pub q: u64,
    pub a: [u64; 3],
}

/// Largest modulus accepted by the table-driven rational evaluators.
const MAX_RATIONAL_MODULUS: u64 = 1 << 20;

/// The cubic Weyl sum `f(alpha; X)`.
///
/// Each term's phase is assembled from three exactly-computed fractional
/// parts `{alpha_j x^j}`, so the result is accurate to a few ulps per term
/// uniformly in `X` (no `X^3`-sized phase is ever formed in floating
/// point).
pub fn weyl_sum_f(alpha: &PhasePoint, x: u64) -> Complex64 {
    let a = alpha.reduced();
    let mut re = 0.0f64;
    let mut im = 0.0f64;
    let (mut c_re, mut c_im) = (0.0f64, 0.0f64);
    for n in 1..=x {
        let nf = n as f64;
        let n2 = (n as u128) * (n as u128);
        let n3 = n2 * (n as u128);
        let mut t = fract_mul(a.a1, nf) + fract_mul_u128(a.a2, n2) + fract_mul_u128(a.a3, n3);
        t -= t.floor();
        let (tre, tim) = unit(t);
        // Kahan accumulation keeps the sum exact to a few ulps even for
        // X in the millions.
        let y = tre - c_re;
        let s = re + y;
        c_re = (s - re) - y;
        re = s;
        let y = tim - c_im;
        let s = im + y;
        c_im = (s - im) - y;
        im = s;
    }
    Complex64::new(re, im)
}

/// `f(a/q; X)` evaluated with exact integer phase arithmetic: the phase of
/// the term at `x` depends only on `x mod q`, and the numerator
/// `a_1 r + a_2 r^2 + a_3 r^3 mod q` is computed in integers.
pub fn weyl_sum_f_rational(center: &RationalCenter, x: u64) -> Complex64 {
    let q = center.q;
    assert!(q >= 1 && q <= MAX_RATIONAL_MODULUS, "modulus out of range");
    // e_q(t) for t in [0, q).
    let table: Vec<(f64, f64)> = (0..q).map(|t| unit(t as f64 / q as f64)).collect();
    let phase_of = |r: u64| -> u64 {
        let r2 = r * r % q;
        let r3 = r2 * r % q;
        (center.a[0] % q * r + center.a[1] % q * r2 + center.a[2] % q * r3) % q
    };
    let mut acc = Complex64::new(0.0, 0.0);
    if x >= q {
        // Full blocks contribute m copies of the complete sum.
        let m = x / q;
        let mut block = Complex64::new(0.0, 0.0);
        for r in 0..q {
            let (tre, tim) = table[phase_of(r) as usize];
            block += Complex64::new(tre, tim);
        }
        acc += block * m as f64;
    }
    // Remaining partial block covers x = q*(x/q) + 1 ..= X, i.e. residues
    // 1 ..= x mod q.
    for r in 1..=(x % q) {
        let (tre, tim) = table[phase_of(r) as usize];
        acc += Complex64::new(tre, tim);
    }
    acc
}

/// The complete cubic exponential sum `S(q, a)`.
pub fn complete_sum_s(center: &RationalCenter) -> Complex64 {
    weyl_sum_f_rational(center, center.q)
}

/// The companion quadratic sum
///
/// ```text
/// g(alpha, theta; X) = sum_{1 <= y <= X}
///     e(y (theta + 2 h_1 alpha_2 + 3 h_2 alpha_3) + y^2 (3 h_1 alpha_3)),
/// ```
///
/// which arises when one pair of the cubic system's equations is
/// differenced against a fixed offset `h`. The linear and quadratic
/// coefficients are assembled from exact fractional parts of the integer
/// multiples, then each term's phase is again an exact product.
pub fn shifted_sum_g(alpha: &PhasePoint, theta: f64, x: u64, h: &Offset) -> Complex64 {
    let a = alpha.reduced();
    // frac(k * alpha) for signed integer k, as a value in [0, 1).
    let frac_int_mul =
        |alpha: f64, k: i64| fract_mul_signed(if k < 0 { -alpha } else { alpha }, k.unsigned_abs());
    let mut c1 = theta.rem_euclid(1.0)
        + frac_int_mul(a.a2, 2 * h.h1)
        + frac_int_mul(a.a3, 3 * h.h2);
    c1 -= c1.floor();
    let c2 = frac_int_mul(a.a3, 3 * h.h1);
    let mut acc = Complex64::new(0.0, 0.0);
    for y in 1..=x {
        let y2 = (y as u128) * (y as u128);
        let mut t = fract_mul(c1, y as f64) + fract_mul_u128(c2, y2);
        t -= t.floor();
        let (tre, tim) = unit(t);
        acc += Complex64::new(tre, tim);
    }
    acc
}

/// The scaled oscillatory integral
/// `I(beta; X) = X * I(beta_1 X, beta_2 X^2, beta_3 X^3)`, with absolute
/// error target `tol`.
pub fn scaled_i(beta: &[f64; 3], x: f64, tol: f64) -> QuadResult {
    let scaled = [beta[0] * x, beta[1] * x * x, beta[2] * x * x * x];
    let inner = oscillatory_i(scaled, (tol / x).max(1e-15));
    QuadResult {
        value: inner.value * x,
        error_estimate: inner.error_estimate * x,
        converged: inner.converged,
        evaluations: inner.evaluations,
    }
}

/// The major-arc approximant `V(alpha) = q^-1 S(q, a) I(alpha - a/q; X)`.
///
/// The offsets `alpha_j - a_j/q` are wrapped to `[-1/2, 1/2)` so the
/// integral sees the small representative.
pub fn arc_approximant_v(
    alpha: &PhasePoint,
    center: &RationalCenter,
    x: f64,
    tol: f64,
) -> Complex64 {
    let q = center.q as f64;
    let aa = alpha.reduced().as_array();
    let mut d = [0.0f64; 3];
    for j in 0..3 {
        let raw = aa[j] - center.a[j] as f64 / q;
        d[j] = raw - raw.round();
    }
    let s = complete_sum_s(center);
    let i = scaled_i(&d, x, tol);
    s / q * i.value
}

/// Exact Fourier coefficient of `|f|^{2s}` on a product grid:
///
/// ```text
/// N^-1 sum_{k} |f(k_1/N_1, k_2/N_2, k_3/N_3; X)|^{2s}
///            * e(-(k_1 h_1 / N_1 + k_2 h_2 / N_2 + k_3 h_3 / N_3))
/// ```
///
/// with `N = N_1 N_2 N_3`. The moment spectrum of `|f|^{2s}` has degree
/// at most `2 s X^j` in `alpha_j`, so once `N_j > 2 s X^j` (the
/// precondition) the grid sum computes the *folded* coefficient
/// `sum over m ≡ h (mod N) of B_s(X; m)` exactly — and since each
/// residue class then holds at most one representable moment, this
/// equals `B_s(X; h)` whenever the offset is within the representable
/// range `|h_j| <= s (X^j - 1)`, and likewise whenever its residue
/// class contains no represented moment. An offset far outside the
/// range can fold onto a represented moment of a *different* count;
/// callers comparing against exact counts keep `|h_j|` within the
/// representable range or accept the folded semantics.
pub fn grid_fourier_coefficient(s: u32, x: u64, h: &Offset, grid: [u64; 3]) -> Result<f64> {
    if s == 0 || s > crate::domain::MAX_S || x == 0 {
        return Err(Error::Config("need 1 <= s <= 8 and X >= 1".into()));
    }
    for j in 0..3 {
        let degree = 2 * s as u128 * (x as u128).pow(j as u32 + 1);
        if (grid[j] as u128) <= degree {
            return Err(Error::Config(format!(
                "grid size N_{} = {} does not resolve the degree-{} spectrum",
                j + 1,
                grid[j],
                degree
            )));
        }
    }
    let points = grid[0] as u128 * grid[1] as u128 * grid[2] as u128;
    let work = points.saturating_mul(x as u128);
    if work > 4_000_000_000 {
        return Err(Error::Budget {
            what: "grid evaluation operations",
            required: work,
            limit: 4_000_000_000,
        });
    }
    // Residues x^j mod N_j for each x; phases are then exact integers.
    let mut residues: Vec<[u64; 3]> = Vec::with_capacity(x as usize);
    for n in 1..=x {
        let mut row = [0u64; 3];
        let mut p = 1u128;
        for j in 0..3 {
            p *= n as u128;
            row[j] = (p % grid[j] as u128) as u64;
        }
        residues.push(row);
    }
    let hmod = [
        h.h1.rem_euclid(grid[0] as i64) as u64,
        h.h2.rem_euclid(grid[1] as i64) as u64,
        h.h3.rem_euclid(grid[2] as i64) as u64,
    ];
    let inv_n = [
        1.0 / grid[0] as f64,
        1.0 / grid[1] as f64,
        1.0 / grid[2] as f64,
    ];
    let mut total = 0.0f64;
    let mut comp = 0.0f64;
    for k1 in 0..grid[0] {
        for k2 in 0..grid[1] {
            for k3 in 0..grid[2] {
                let k = [k1, k2, k3];
                let mut fre = 0.0f64;
                let mut fim = 0.0f64;
                for row in &residues {
                    let mut t = 0.0f64;
                    for j in 0..3 {
                        t += (k[j] * row[j] % grid[j]) as f64 * inv_n[j];
                    }
                    t -= t.floor();
                    let (c, si) = unit(t);
                    fre += c;
                    fim += si;
                }
                let power = (fre * fre + fim * fim).powi(s as i32);
                let mut tw = 0.0f64;
                for j in 0..3 {
                    tw += (k[j] * hmod[j] % grid[j]) as f64 * inv_n[j];
                }
                tw -= tw.floor();
                // Re(|f|^{2s} e(-2 pi i tw)) = |f|^{2s} cos(2 pi tw).
                let term = power * (std::f64::consts::TAU * tw).cos();
                let y = term - comp;
                let v = total + y;
                comp = (v - total) - y;
                total = v;
            }
        }
    }
    Ok(total / points as f64)
}

/// The one-dimensional major-arc weight at cutoff `Q = X`:
/// `(q + X^3 |q alpha - a|)^-1` when `alpha` lies in the arc at `a/q`,
/// and `0` on the minor arcs.
pub fn psi(alpha3: f64, x: u64) -> f64 {
    let xf = x as f64;
    match classify_one_dim(alpha3, xf, xf) {
        OneDimLabel::Major { q, a } => {
            let dist = (q as f64 * alpha3.rem_euclid(1.0) - a as f64).abs();
            1.0 / (q as f64 + xf * xf * xf * dist)
        }
        OneDimLabel::Minor => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn zero_phase_counts_terms() {
        let f = weyl_sum_f(&PhasePoint::new(0.0, 0.0, 0.0), 7);
        assert!((f.re - 7.0).abs() < TOL && f.im.abs() < TOL);
    }

    #[test]
    fn half_phase_cancels_pairs() {
        // alpha = (1/2, 0, 0), X = 2: e(1/2) + e(1) = -1 + 1 = 0.
        let f = weyl_sum_f(&PhasePoint::new(0.5, 0.0, 0.0), 2);
        assert!(f.norm() < TOL, "got {f}");
    }

    #[test]
    fn trivial_bound_holds() {
        for i in 0..20 {
            let a = PhasePoint::new(
                (i as f64 * 0.37).fract(),
                (i as f64 * 0.59).fract(),
                (i as f64 * 0.83).fract(),
            );
            assert!(weyl_sum_f(&a, 50).norm() <= 50.0 + TOL);
        }
    }

    #[test]
    fn conjugate_symmetry_and_periodicity() {
        let a = PhasePoint::new(0.1375, 0.291, 0.7003);
        let neg = PhasePoint::new(-0.1375, -0.291, -0.7003);
        let shifted = PhasePoint::new(0.1375 + 1.0, 0.291 + 2.0, 0.7003 - 3.0);
        let f = weyl_sum_f(&a, 40);
        let fneg = weyl_sum_f(&neg, 40);
        let fsh = weyl_sum_f(&shifted, 40);
        assert!((f.conj() - fneg).norm() < 1e-9);
        assert!((f - fsh).norm() < 1e-9);
    }

    #[test]
    fn rational_block_identity() {
        // f(a/q; q m) = m S(q, a): complete blocks repeat the complete
        // sum. The rational evaluator is exact, and the floating
        // evaluator must agree with it closely.
        for q in 1..=20u64 {
            for trial in 0..4 {
                let a = [
                    (trial * 7 + 1) % (q + 1),
                    (trial * 11 + 2) % (q + 1),
                    (trial * 13 + 3) % (q + 1),
                ];
                let center = RationalCenter { q, a };
                let s = complete_sum_s(&center);
                for m in 1..=5u64 {
                    let f = weyl_sum_f_rational(&center, q * m);
                    let expected = s * m as f64;
                    assert!(
                        (f - expected).norm() <= 1e-9 * expected.norm().max(1.0),
                        "q={q} a={a:?} m={m}"
                    );
                }
                // Floating path against the exact one at the same point.
                let alpha = PhasePoint::new(
                    a[0] as f64 / q as f64,
                    a[1] as f64 / q as f64,
                    a[2] as f64 / q as f64,
                );
                let f_float = weyl_sum_f(&alpha, q * 3);
                let f_exact = weyl_sum_f_rational(&center, q * 3);
                assert!(
                    (f_float - f_exact).norm() < 1e-9,
                    "float/exact mismatch at q={q} a={a:?}"
                );
            }
        }
    }

    #[test]
    fn complete_sum_values() {
        // S(1, anything) = 1.
        let s1 = complete_sum_s(&RationalCenter { q: 1, a: [0, 0, 0] });
        assert!((s1 - Complex64::new(1.0, 0.0)).norm() < TOL);
        // S(2, (1,1,1)): r=1 -> e(3/2) = -1; r=2 -> e(7 odd ... ) phase
        // (1*2 + 1*4 + 1*8) = 14 = 0 mod 2 -> +1. Total 0.
        let s2 = complete_sum_s(&RationalCenter { q: 2, a: [1, 1, 1] });
        assert!(s2.norm() < TOL, "got {s2}");
        // S(3, (0,0,1)): cubes mod 3 are r^3 = r, so this is a full
        // character sum: e(1/3) + e(2/3) + 1 = 0.
        let s3 = complete_sum_s(&RationalCenter { q: 3, a: [0, 0, 1] });
        assert!(s3.norm() < TOL, "got {s3}");
    }

    #[test]
    fn complete_sum_square_root_scale() {
        // |S(q, a)| for gcd(q, a1, a2, a3) = 1 stays within a modest
        // multiple of q^(2/3) (the classical bound for cubic moduli).
        for q in 1..=200u64 {
            let a = [(q / 3) % (q + 1), (q / 2 + 1) % (q + 1), 1];
            let g = {
                fn gcd(a: u64, b: u64) -> u64 {
                    if b == 0 {
                        a
                    } else {
                        gcd(b, a % b)
                    }
                }
                gcd(gcd(q, a[0]), gcd(a[1], a[2]))
            };
            if g != 1 {
                continue;
            }
            let s = complete_sum_s(&RationalCenter { q, a }).norm();
            assert!(
                s <= 6.0 * (q as f64).powf(2.0 / 3.0),
                "|S({q}, {a:?})| = {s}"
            );
        }
    }

    #[test]
    fn shifted_sum_degenerate_cases() {
        // theta = 0, alpha = 0: every term is 1.
        let g = shifted_sum_g(
            &PhasePoint::new(0.0, 0.0, 0.0),
            0.0,
            5,
            &Offset::new(1, 0, 0),
        );
        assert!((g.re - 5.0).abs() < TOL && g.im.abs() < TOL);
        // h1 = 0 kills the quadratic term; with h2 = 2, alpha3 = 1/2 the
        // linear coefficient 3 * 2 * 1/2 = 3 is an integer, so every
        // term is exactly 1 (integer phases, exact arithmetic).
        let g = shifted_sum_g(
            &PhasePoint::new(0.0, 0.0, 0.5),
            0.0,
            9,
            &Offset::new(0, 2, 0),
        );
        assert_eq!(g.re, 9.0);
        assert_eq!(g.im, 0.0);
        // Trivial bound.
        let g = shifted_sum_g(
            &PhasePoint::new(0.3, 0.61, 0.17),
            0.25,
            30,
            &Offset::new(2, -1, 3),
        );
        assert!(g.norm() <= 30.0 + TOL);
    }

    #[test]
    fn shifted_sum_matches_direct_phase() {
        // Small parameters: compare against a direct evaluation of the
        // defining sum with f64 phases (safe at these sizes).
        let alpha = PhasePoint::new(0.21, 0.345, 0.077);
        let h = Offset::new(2, -3, 1);
        let theta = 0.4375;
        let x = 25u64;
        let c1 = theta + 2.0 * h.h1 as f64 * alpha.a2 + 3.0 * h.h2 as f64 * alpha.a3;
        let c2 = 3.0 * h.h1 as f64 * alpha.a3;
        let mut direct = Complex64::new(0.0, 0.0);
        for y in 1..=x {
            let t = c1 * y as f64 + c2 * (y * y) as f64;
            direct += Complex64::new(0.0, std::f64::consts::TAU * t).exp();
        }
        let g = shifted_sum_g(&alpha, theta, x, &h);
        assert!((g - direct).norm() < 1e-8, "g={g} direct={direct}");
    }

    #[test]
    fn scaled_integral_at_zero() {
        // I(0; X) = X * integral of 1 = X.
        let r = scaled_i(&[0.0, 0.0, 0.0], 10.0, 1e-10);
        assert!((r.value.re - 10.0).abs() < 1e-8 && r.value.im.abs() < 1e-8);
        assert!(r.converged);
    }

    #[test]
    fn approximant_matches_f_at_center_q1() {
        // At alpha = 0 with center 0/1: V = S(1,0) * I(0; X) = X = f(0; X).
        let v = arc_approximant_v(
            &PhasePoint::new(0.0, 0.0, 0.0),
            &RationalCenter { q: 1, a: [0, 0, 0] },
            5.0,
            1e-10,
        );
        assert!((v - Complex64::new(5.0, 0.0)).norm() < 1e-7, "got {v}");
    }

    #[test]
    fn approximant_close_on_narrow_box() {
        // A genuinely off-center point inside a narrow box at X = 100:
        // the approximant should track f to o(X) accuracy.
        let x = 100u64;
        let center = RationalCenter { q: 1, a: [0, 0, 0] };
        let alpha = PhasePoint::new(1e-4, 1e-6, 1e-8);
        let f = weyl_sum_f(&alpha, x);
        let v = arc_approximant_v(&alpha, &center, x as f64, 1e-10);
        assert!(
            (f - v).norm() < 1.0,
            "f = {f}, V = {v}, diff = {}",
            (f - v).norm()
        );
    }

    #[test]
    fn grid_on_small_cases() {
        // s = 1, X = 1: |f|^2 = 1 identically, offset 0: coefficient 1.
        let v = grid_fourier_coefficient(1, 1, &Offset::ZERO, [3, 3, 3]).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "got {v}");
        // s = 1, X = 2, h = (1, 3, 7): exactly one solution pair.
        let v = grid_fourier_coefficient(1, 2, &Offset::new(1, 3, 7), [5, 9, 17]).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn grid_rejects_underresolved() {
        // N_j must strictly exceed the spectrum degree 2sX^j; equality
        // is not enough (here 2sX = 4 and 2sX^3 = 16).
        assert!(grid_fourier_coefficient(1, 2, &Offset::ZERO, [4, 9, 17]).is_err());
        assert!(grid_fourier_coefficient(1, 2, &Offset::ZERO, [5, 9, 16]).is_err());
    }

    #[test]
    fn grid_folds_large_offsets() {
        // An offset outside the represented moment range is read modulo
        // the grid. Here (0, 0, 100) folds to the class (0, 0, 15) mod
        // (5, 9, 17), which contains none of the three moments realized
        // at s = 1, X = 2, so the coefficient vanishes.
        let v = grid_fourier_coefficient(1, 2, &Offset::new(0, 0, 100), [5, 9, 17]).unwrap();
        assert!(v.abs() < 1e-9, "got {v}");
    }

    #[test]
    fn weight_examples() {
        // alpha = 0: center 0/1, distance 0 -> weight 1.
        assert!((psi(0.0, 10) - 1.0).abs() < 1e-12);
        // alpha = 1/2: center 1/2, q = 2, distance 0 -> 1/2.
        assert!((psi(0.5, 10) - 0.5).abs() < 1e-12);
        // Golden ratio at Q = X = 10: nearest fraction with q <= 10 is
        // 8/13 -- denominator too big -- and smaller-q fractions miss by
        // more than Q X^-3 = 1e-2... check: 5/8 -> |8a - 5| = 0.0557 >
        // 10 * 1e-3. Minor, weight 0.
        assert_eq!(psi(0.618_033_988_749_894_9, 10), 0.0);
    }
}
