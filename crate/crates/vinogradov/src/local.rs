//! Local (mod-q and p-adic) solution densities for the cubic system.
//!
//! The singular series attached to the counting problem is
//!
//! ```text
//! S_s(h) = sum_{q >= 1} A_q(h),
//! A_q(h) = sum_{a mod q, gcd(q, a1, a2, a3) = 1} |S(q, a) / q|^{2s} e_q(-a . h),
//! ```
//!
//! with `S(q, a)` the complete cubic sum. `A_q` is multiplicative in `q`,
//! so the series factors over primes, and the partial Euler factor at `p`
//! up to level `H`,
//!
//! ```text
//! chi_p(H) = sum_{l = 0}^{H} A_{p^l}(h),
//! ```
//!
//! equals the normalized solution count `p^{-H(2s-3)} N(p^H; h)` of the
//! system mod `p^H` — two routes to the same number, which [`padic_density_via_sums`]
//! and [`padic_density_via_counting`] compute independently.
//!
//! Positivity of the density at every prime is certified by
//! [`hensel_nonsingular_search`]: a solution mod `p^k` whose Jacobian has
//! a 3x3 minor of small enough `p`-adic valuation lifts to arbitrary
//! depth, so one witness pins the Euler factor away from zero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{Budget, Offset, MAX_S};
use crate::error::{Error, Result};
use crate::expsum::unit_phase;

/// A truncated density evaluation with enough context to judge it.
#[derive(Debug, Clone)]
pub struct DensityReport {
    /// The truncated value.
    pub value: f64,
    /// Truncation parameter: `qmax` for the series, level `H` for the
    /// p-adic factors.
    pub truncation: u64,
    /// Estimated size of the discarded tail, when a model fits.
    pub tail_estimate: Option<f64>,
    /// Largest imaginary residue seen across the partial sums (the exact
    /// quantities are real; this is a numerical health check).
    pub imag_residual: f64,
    /// Which route produced the value.
    pub method: &'static str,
    /// The individual terms (series: `A_q` for `q = 1..=qmax`; p-adic:
    /// `A_{p^l}` for `l = 0..=H`).
    pub terms: Vec<f64>,
}

/// Core engine: `sum_a |S(q, a)/q|^{2s} e_q(-a . h)` over `a` in
/// `[0, q)^3`, either restricted to `gcd(q, a1, a2, a3) = 1` (the series
/// term) or unrestricted (the counting route). Cost is `Theta(q^4)`
/// complex operations; the budget is checked before any allocation.
fn twisted_power_sum(
    q: u64,
    s: u32,
    h: &Offset,
    coprime_only: bool,
    budget: &Budget,
) -> Result<(f64, f64)> {
    assert!(q >= 1, "modulus must be positive");
    assert!((1..=MAX_S).contains(&s), "s out of range");
    let ops = (q as u128).pow(4);
    Budget::check("local series operations", ops, budget.series_ops)?;
    let qu = q as usize;
    // e_q(t) for t in [0, q).
    let table: Vec<(f64, f64)> = (0..q).map(|t| unit_phase(t as f64 / q as f64)).collect();
    // r^2, r^3 mod q.
    let r2: Vec<u64> = (0..q).map(|r| r * r % q).collect();
    let r3: Vec<u64> = (0..q).map(|r| r2[r as usize] * r % q).collect();
    let hm = [
        h.h1.rem_euclid(q as i64) as u64,
        h.h2.rem_euclid(q as i64) as u64,
        h.h3.rem_euclid(q as i64) as u64,
    ];
    let inv_q2 = 1.0 / (q as f64 * q as f64);
    let mut total_re = 0.0f64;
    let mut total_im = 0.0f64;
    let (mut comp_re, mut comp_im) = (0.0f64, 0.0f64);
    let mut w = vec![0u64; qu];
    for a3 in 0..q {
        let g3 = gcd(q, a3);
        for a2 in 0..q {
            // gcd(q, a1, a2, a3) = 1 iff gcd(gcd(q, a2, a3), a1) = 1.
            let g23 = gcd(g3, a2);
            if coprime_only && g23 == q && q > 1 {
                // a2 = a3 = 0 mod everything dividing q: only a1 coprime
                // to q survives below; keep going (filter is per-a1).
            }
            // Quadratic-plus-cubic part of the phase, reused across a1.
            for r in 0..qu {
                w[r] = (a2 * r2[r] + a3 * r3[r]) % q;
            }
            for a1 in 0..q {
                let keep = !coprime_only || gcd(g23, a1) == 1;
                if keep {
                    let mut s_re = 0.0f64;
                    let mut s_im = 0.0f64;
                    for &t in w.iter() {
                        let (c, si) = table[t as usize];
                        s_re += c;
                        s_im += si;
                    }
                    let norm = (s_re * s_re + s_im * s_im) * inv_q2;
                    let power = norm.powi(s as i32);
                    let tw = (a1 * hm[0] + a2 * hm[1] + a3 * hm[2]) % q;
                    let (c, si) = table[tw as usize];
                    // e_q(-a.h) = conj(e_q(a.h)).
                    let term_re = power * c;
                    let term_im = -power * si;
                    let y = term_re - comp_re;
                    let t = total_re + y;
                    comp_re = (t - total_re) - y;
                    total_re = t;
                    let y = term_im - comp_im;
                    let t = total_im + y;
                    comp_im = (t - total_im) - y;
                    total_im = t;
                }
                // Advance the linear part: w[r] += r (mod q).
                for (r, slot) in w.iter_mut().enumerate() {
                    let v = *slot + r as u64;
                    *slot = if v >= q { v - q } else { v };
                }
            }
            // Reset w for the next a2 (it drifted by q * r = 0 mod q, so
            // in fact it is already back; the loop above added r exactly
            // q times). Nothing to do.
        }
    }
    Ok((total_re, total_im))
}

/// One series term `A_q(h)` (the coprime-filtered twisted power sum).
///
/// The exact value is real; an imaginary residue above 1e-10 aborts with
/// a numerical-health error.
pub fn series_term(q: u64, s: u32, h: &Offset, budget: &Budget) -> Result<f64> {
    let (re, im) = twisted_power_sum(q, s, h, true, budget)?;
    if im.abs() > 1e-10 {
        return Err(Error::Config(format!(
            "series term at q = {q} has imaginary residue {im:e}"
        )));
    }
    Ok(re)
}

/// Truncation of the singular series: `sum_{q <= qmax} A_q(h)`, plus a
/// tail estimate fitted to the observed decay.
///
/// The tail model is `|A_q| ~ C q^(-tau)`; `C` and `tau` come from a
/// log-log least-squares fit over the top decade of `q` (nonzero terms
/// only), and the reported tail is `C qmax^(1-tau) / (tau - 1)` when the
/// fit converges with `tau > 1`.
pub fn singular_series_truncated(
    s: u32,
    h: &Offset,
    qmax: u64,
    budget: &Budget,
) -> Result<DensityReport> {
    if qmax < 1 {
        return Err(Error::Config("series truncation needs qmax >= 1".into()));
    }
    let mut terms = Vec::with_capacity(qmax as usize);
    let mut value = 0.0f64;
    let mut comp = 0.0f64;
    let mut imag_max = 0.0f64;
    for q in 1..=qmax {
        let (re, im) = twisted_power_sum(q, s, h, true, budget)?;
        imag_max = imag_max.max(im.abs());
        terms.push(re);
        let y = re - comp;
        let t = value + y;
        comp = (t - value) - y;
        value = t;
    }
    let tail_estimate = fit_power_tail(&terms, qmax);
    Ok(DensityReport {
        value,
        truncation: qmax,
        tail_estimate,
        imag_residual: imag_max,
        method: "truncated-series",
        terms,
    })
}

/// Least-squares fit of `log |A_q| = log C - tau log q` over the top
/// decade `q in (qmax/10, qmax]`, returning the implied tail
/// `sum_{q > qmax} C q^-tau ~ C qmax^(1-tau) / (tau - 1)`.
fn fit_power_tail(terms: &[f64], qmax: u64) -> Option<f64> {
    let lo = qmax / 10;
    let pts: Vec<(f64, f64)> = terms
        .iter()
        .enumerate()
        .map(|(i, &t)| (i as u64 + 1, t))
        .filter(|&(q, t)| q > lo && t.abs() > 1e-300)
        .map(|(q, t)| ((q as f64).ln(), t.abs().ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let tau = -slope;
    if !(tau > 1.0) || !tau.is_finite() {
        return None;
    }
    let c = intercept.exp();
    Some(c * (qmax as f64).powf(1.0 - tau) / (tau - 1.0))
}

/// Partial Euler factor at `p` via the series route:
/// `chi_p(H) = sum_{l = 0}^{H} A_{p^l}(h)`.
pub fn padic_density_via_sums(
    p: u64,
    s: u32,
    h: &Offset,
    level: u32,
    budget: &Budget,
) -> Result<DensityReport> {
    require_prime(p)?;
    let mut terms = Vec::with_capacity(level as usize + 1);
    let mut value = 0.0f64;
    let mut imag_max = 0.0f64;
    for l in 0..=level {
        let q = checked_prime_power(p, l)?;
        let (re, im) = twisted_power_sum(q, s, h, true, budget)?;
        imag_max = imag_max.max(im.abs());
        terms.push(re);
        value += re;
    }
    Ok(DensityReport {
        value,
        truncation: level as u64,
        tail_estimate: None,
        imag_residual: imag_max,
        method: "euler-factor-sums",
        terms,
    })
}

/// Partial Euler factor at `p` via the counting route:
/// `p^{-H(2s-3)} N(p^H; h)`, evaluated as the *unfiltered* twisted power
/// sum at `q = p^H` (orthogonality turns the count into that sum).
pub fn padic_density_via_counting(
    p: u64,
    s: u32,
    h: &Offset,
    level: u32,
    budget: &Budget,
) -> Result<DensityReport> {
    require_prime(p)?;
    let q = checked_prime_power(p, level)?;
    let (re, im) = twisted_power_sum(q, s, h, false, budget)?;
    if im.abs() > 1e-9 {
        return Err(Error::Config(format!(
            "counting route at {p}^{level} has imaginary residue {im:e}"
        )));
    }
    Ok(DensityReport {
        value: re,
        truncation: level as u64,
        tail_estimate: None,
        imag_residual: im.abs(),
        method: "euler-factor-counting",
        terms: vec![re],
    })
}

fn require_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Config(format!("{p} is not prime")));
    }
    Ok(())
}

fn checked_prime_power(p: u64, l: u32) -> Result<u64> {
    let q = (p as u128).checked_pow(l).filter(|&v| v <= u64::MAX as u128);
    q.map(|v| v as u64)
        .ok_or_else(|| Error::Config(format!("{p}^{l} overflows")))
}

/// Deterministic trial-division primality (fine for the word-sized
/// moduli this module handles).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
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

/// A certified nonsingular p-adic solution: the system holds mod
/// `p^depth` and the named 3x3 Jacobian minor has valuation at most
/// `minor_valuation`, which is small enough that the solution lifts to
/// every higher power of `p`.
#[derive(Debug, Clone)]
pub struct HenselWitness {
    pub p: u64,
    /// The certified level: the system holds mod `p^depth`.
    pub depth: u32,
    /// `p^depth`.
    pub modulus: u64,
    pub x: Vec<u64>,
    pub y: Vec<u64>,
    /// Indices (into the concatenated variable list `x_1..x_s, y_1..y_s`)
    /// of the three columns forming the invertible-enough minor.
    pub minor_cols: [usize; 3],
    /// Valuation of that minor's determinant (at most `max_allowed_valuation(p)`).
    pub minor_valuation: u32,
}

/// The largest usable minor valuation at `p`. A column at value `u` is
/// `(1, 2u, 3u^2)` (negated for `y`-columns; signs drop out of the
/// valuation), so a 3x3 minor on columns with values `u_1, u_2, u_3` is
/// `+-6 (u_2 - u_1)(u_3 - u_1)(u_3 - u_2)` — a Vandermonde scaled by
/// `1 * 2 * 3`. Its valuation is `val_p(6)` plus whatever pigeonholing
/// forces on the differences: mod 2 three values cannot be pairwise
/// distinct, so at least one difference is even and the minimum is
/// `1 + 1 = 2`; mod 3 distinct residues exist, so the minimum is
/// `val_3(6) = 1`; for `p >= 5` fully nonsingular minors exist.
pub fn max_allowed_valuation(p: u64) -> u32 {
    match p {
        2 => 2,
        3 => 1,
        _ => 0,
    }
}

/// Search for a nonsingular solution of the system mod `p^depth` and
/// certify it by Hensel lifting from the base level `2 v + 1` (with `v`
/// the minor valuation bound above). Returns `Ok(None)` if the
/// randomized search exhausts its trial budget — which, for offsets
/// violating the local solubility congruences, is the expected outcome.
pub fn hensel_nonsingular_search(
    p: u64,
    s: u32,
    h: &Offset,
    depth: u32,
    seed: u64,
    budget: &Budget,
) -> Result<Option<HenselWitness>> {
    require_prime(p)?;
    if !(2..=MAX_S).contains(&s) {
        return Err(Error::Config(
            "witness search needs 2 <= s <= 8 (a 3x3 minor requires >= 3 columns)".into(),
        ));
    }
    if depth == 0 {
        return Err(Error::Config("depth must be >= 1".into()));
    }
    let v = max_allowed_valuation(p);
    let base_level = 2 * v + 1;
    let target = depth.max(base_level);
    // All lifting arithmetic stays below p^(target + v + 1); cap it in u64
    // so squares fit in u128.
    let big = checked_prime_power(p, target + v + 1).map_err(|_| {
        Error::Config(format!(
            "p^(depth + {}) = {p}^{} exceeds the word size",
            v + 1,
            target + v + 1
        ))
    })?;
    if big > (1u64 << 62) {
        return Err(Error::Config(format!(
            "working modulus {p}^{} too large",
            target + v + 1
        )));
    }
    let m0 = checked_prime_power(p, base_level)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let su = s as usize;
    let trials = budget.search_trials;
    for _ in 0..trials {
        // Random y and x_2..x_s mod p^(base_level); x_1 from the linear
        // equation; test the other two.
        let mut x = vec![0u64; su];
        let mut y = vec![0u64; su];
        for slot in y.iter_mut() {
            *slot = rng.gen_range(0..m0);
        }
        for slot in x.iter_mut().skip(1) {
            *slot = rng.gen_range(0..m0);
        }
        let mut x1 = h.h1.rem_euclid(m0 as i64) as u64;
        for &yi in &y {
            x1 = (x1 + yi) % m0;
        }
        for &xi in &x[1..] {
            x1 = (x1 + m0 - xi % m0) % m0;
        }
        x[0] = x1;
        if !system_holds(&x, &y, h, p, base_level)? {
            continue;
        }
        if let Some((cols, val)) = find_good_minor(&x, &y, p, v) {
            // Lift to the target level.
            let witness = lift_to_depth(p, h, x, y, cols, v, base_level, target)?;
            if let Some(w) = witness {
                debug_assert_eq!(w.minor_valuation, val.min(w.minor_valuation));
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Check `sum x_i^j - sum y_i^j = h_j mod p^level` for j = 1, 2, 3.
fn system_holds(x: &[u64], y: &[u64], h: &Offset, p: u64, level: u32) -> Result<bool> {
    let m = checked_prime_power(p, level)?;
    for (j, target) in [h.h1, h.h2, h.h3].iter().enumerate() {
        let mut acc = 0u64;
        for &xi in x {
            acc = (acc + pow_mod(xi % m, j as u32 + 1, m)) % m;
        }
        for &yi in y {
            acc = (acc + m - pow_mod(yi % m, j as u32 + 1, m)) % m;
        }
        if acc != target.rem_euclid(m as i64) as u64 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Scan all 3-subsets of the 2s columns for a minor of valuation <= v.
/// Column values are the variable values themselves (signs cancel out of
/// the valuation). Returns the column indices and the achieved valuation.
fn find_good_minor(x: &[u64], y: &[u64], p: u64, v: u32) -> Option<([usize; 3], u32)> {
    let vals: Vec<u64> = x.iter().chain(y.iter()).copied().collect();
    let n = vals.len();
    let mut best: Option<([usize; 3], u32)> = None;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (u1, u2, u3) = (vals[i], vals[j], vals[k]);
                // det = +-6 (u2-u1)(u3-u1)(u3-u2); its valuation is the
                // sum of the factors' valuations (a zero difference
                // means the minor is singular at every depth).
                let factors = [6u64, u2.abs_diff(u1), u3.abs_diff(u1), u3.abs_diff(u2)];
                let mut val = 0u32;
                let mut singular = false;
                for &f in &factors {
                    if f == 0 {
                        singular = true;
                        break;
                    }
                    val += valuation(f, p);
                }
                if singular {
                    continue;
                }
                if val <= v && best.map_or(true, |(_, bv)| val < bv) {
                    best = Some(([i, j, k], val));
                }
            }
        }
    }
    best
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

fn pow_mod(base: u64, exp: u32, m: u64) -> u64 {
    let mut acc = 1u128;
    let b = (base % m) as u128;
    for _ in 0..exp {
        acc = acc * b % m as u128;
    }
    acc as u64
}

/// Modular inverse by extended Euclid; `a` must be coprime to `m`.
fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        let tmp = old_r - qt * r;
        old_r = r;
        r = tmp;
        let tmp = old_s - qt * s;
        old_s = s;
        s = tmp;
    }
    if old_r.abs() != 1 {
        return None;
    }
    let inv = (old_s * old_r.signum()).rem_euclid(m as i128);
    Some(inv as u64)
}

/// Newton/Hensel lifting on the three minor columns: from a solution mod
/// `p^k` (k >= 2v + 1, minor valuation v) to one mod `p^(k+1)`.
///
/// Writing `F(z) = p^k c` and the minor matrix `M` with `det M = p^v u`
/// (`u` a unit), the correction `z -> z + p^(k-v) eps` with
/// `eps = -(u^-1 mod p^(v+1)) adj(M) c mod p^(v+1)` restores the system
/// mod `p^(k+1)`: the linear term contributes
/// `p^(k-v) M eps = -p^(k-v) p^v u u^-1 c = -p^k c mod p^(k+1)`
/// (using `M adj(M) = det M`), and the quadratic term carries
/// `p^(2(k-v)) >= p^(k+1)` because `k >= 2v + 1`. The minor columns move
/// by multiples of `p^(k-v) >= p^(v+1)`, so the minor's valuation never
/// degrades.
#[allow(clippy::too_many_arguments)]
fn lift_to_depth(
    p: u64,
    h: &Offset,
    mut x: Vec<u64>,
    mut y: Vec<u64>,
    cols: [usize; 3],
    v: u32,
    base_level: u32,
    target: u32,
) -> Result<Option<HenselWitness>> {
    let s = x.len();
    let big = checked_prime_power(p, target + v + 1)?;
    let pv1 = checked_prime_power(p, v + 1)?;
    let pv = checked_prime_power(p, v)?;
    for k in base_level..target {
        let pk = checked_prime_power(p, k)?;
        let pk1 = checked_prime_power(p, k + 1)?;
        // Residual c = F(z) / p^k mod p^(v+1).
        let mut c = [0u64; 3];
        for (j, target_h) in [h.h1, h.h2, h.h3].iter().enumerate() {
            let mut acc = 0u64;
            for &xi in &x {
                acc = add_mod(acc, pow_mod(xi, j as u32 + 1, big), big);
            }
            for &yi in &y {
                acc = sub_mod(acc, pow_mod(yi, j as u32 + 1, big), big);
            }
            acc = sub_mod(acc, target_h.rem_euclid(big as i64) as u64, big);
            debug_assert_eq!(acc % pk, 0, "lift invariant: F = 0 mod p^k");
            c[j] = (acc / pk) % pv1;
        }
        if c == [0, 0, 0] {
            continue; // already a solution mod p^(k+1)
        }
        // Minor matrix M_{j,i} = sign_i * (j+1) * u_i^j, worked mod
        // p^(2v+2) so the determinant is resolved past p^(2v+1).
        let pm = checked_prime_power(p, 2 * v + 2)?;
        let col_value = |c: usize| -> (u64, bool) {
            if c < s {
                (x[c], true)
            } else {
                (y[c - s], false)
            }
        };
        let mut m = [[0u64; 3]; 3];
        for (i, &ci) in cols.iter().enumerate() {
            let (u, positive) = col_value(ci);
            for j in 0..3 {
                let deriv = (j as u64 + 1) % pm * pow_mod(u, j as u32, pm) % pm;
                m[j][i] = if positive { deriv } else { (pm - deriv) % pm };
            }
        }
        let det = det3_mod(&m, pm);
        if det % pv != 0 {
            return Err(Error::Config(
                "lift invariant violated: minor valuation dropped".into(),
            ));
        }
        let unit = (det / pv) % pv1;
        let Some(unit_inv) = inv_mod(unit % pv1, pv1) else {
            // Valuation grew past v: certificate invalid (should not
            // happen given find_good_minor's screen).
            return Ok(None);
        };
        let adj = adjugate3_mod(&m, pv1);
        // eps = -unit^-1 * adj * c mod p^(v+1).
        let mut eps = [0u64; 3];
        for i in 0..3 {
            let mut acc = 0u64;
            for j in 0..3 {
                acc = add_mod(acc, adj[i][j] % pv1 * (c[j] % pv1) % pv1, pv1);
            }
            acc = acc * unit_inv % pv1;
            eps[i] = (pv1 - acc) % pv1;
        }
        // Apply z -> z + p^(k-v) eps on the minor columns, mod p^(k+1)
        // (tracked in the big modulus).
        let shift = checked_prime_power(p, k - v)?;
        for (i, &ci) in cols.iter().enumerate() {
            let delta = shift % big * (eps[i] % big) % big;
            if ci < s {
                x[ci] = add_mod(x[ci], delta, big);
            } else {
                y[ci - s] = add_mod(y[ci - s], delta, big);
            }
        }
        if !system_holds_mod(&x, &y, h, pk1, big) {
            return Err(Error::Config(
                "lift step failed to restore the system".into(),
            ));
        }
    }
    // Reduce to the certified modulus.
    let md = checked_prime_power(p, target)?;
    for slot in x.iter_mut().chain(y.iter_mut()) {
        *slot %= md;
    }
    // Final re-certification at the target level.
    if !system_holds(&x, &y, h, p, target)? {
        return Err(Error::Config("final witness check failed".into()));
    }
    let vals: Vec<u64> = x.iter().chain(y.iter()).copied().collect();
    let minor_valuation = {
        let (u1, u2, u3) = (vals[cols[0]], vals[cols[1]], vals[cols[2]]);
        [6u64, u2.abs_diff(u1), u3.abs_diff(u1), u3.abs_diff(u2)]
            .iter()
            .map(|&f| if f == 0 { u32::MAX / 8 } else { valuation(f, p) })
            .sum::<u32>()
    };
    if minor_valuation > v {
        return Ok(None);
    }
    Ok(Some(HenselWitness {
        p,
        depth: target,
        modulus: md,
        x,
        y,
        minor_cols: cols,
        minor_valuation,
    }))
}

fn system_holds_mod(x: &[u64], y: &[u64], h: &Offset, m: u64, big: u64) -> bool {
    for (j, target) in [h.h1, h.h2, h.h3].iter().enumerate() {
        let mut acc = 0u64;
        for &xi in x {
            acc = add_mod(acc, pow_mod(xi, j as u32 + 1, big), big);
        }
        for &yi in y {
            acc = sub_mod(acc, pow_mod(yi, j as u32 + 1, big), big);
        }
        let want = target.rem_euclid(m as i64) as u64;
        if acc % m != want {
            return false;
        }
    }
    true
}

fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + m as u128 - (b % m) as u128) % m as u128) as u64
}

fn det3_mod(m: &[[u64; 3]; 3], md: u64) -> u64 {
    let mm = md as u128;
    let a = |i: usize, j: usize| m[i][j] as u128;
    let pos = a(0, 0) * (a(1, 1) * a(2, 2) % mm) % mm
        + a(0, 1) * (a(1, 2) * a(2, 0) % mm) % mm
        + a(0, 2) * (a(1, 0) * a(2, 1) % mm) % mm;
    let neg = a(0, 2) * (a(1, 1) * a(2, 0) % mm) % mm
        + a(0, 0) * (a(1, 2) * a(2, 1) % mm) % mm
        + a(0, 1) * (a(1, 0) * a(2, 2) % mm) % mm;
    ((pos % mm + 2 * mm - neg % mm) % mm) as u64
}

/// Adjugate of a 3x3 matrix mod `md` (so `M adj(M) = det(M) I`).
fn adjugate3_mod(m: &[[u64; 3]; 3], md: u64) -> [[u64; 3]; 3] {
    let mm = md as u128;
    let a = |i: usize, j: usize| m[i][j] as u128;
    let cof = |i: usize, j: usize| -> u64 {
        let (r1, r2) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (c1, c2) = match j {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor =
            (a(r1, c1) * a(r2, c2) % mm + mm - a(r1, c2) * a(r2, c1) % mm) % mm;
        let sign = (i + j) % 2 == 0;
        if sign {
            minor as u64
        } else {
            ((mm - minor) % mm) as u64
        }
    };
    let mut adj = [[0u64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            // adj = transpose of the cofactor matrix.
            adj[i][j] = cof(j, i);
        }
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn series_term_at_one_is_one() {
        for s in 1..=3 {
            for h in [Offset::ZERO, Offset::new(1, 2, 3)] {
                assert_eq!(series_term(1, s, &h, &budget()).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn series_term_small_modulus_values() {
        // q = 2, s = 6: S(2, a) = 1 + e((a1 + a2 + a3)/2), so |S/2|^12 is
        // 1 when a1 + a2 + a3 is even, 0 otherwise. The coprime filter at
        // q = 2 only removes (0,0,0). Evaluating the twisted sum by hand:
        // h = 0: terms (0,1,1),(1,0,1),(1,1,0) survive -> 3.
        let t = series_term(2, 6, &Offset::ZERO, &budget()).unwrap();
        assert!((t - 3.0).abs() < 1e-12, "got {t}");
        // h = (1,1,1): each surviving tuple has a.h even -> +1 each -> 3.
        let t = series_term(2, 6, &Offset::new(1, 1, 1), &budget()).unwrap();
        assert!((t - 3.0).abs() < 1e-12, "got {t}");
        // h = (0,0,1): tuples (0,1,1) and (1,0,1) twist by e(-1/2) = -1,
        // (1,1,0) by +1 -> -1.
        let t = series_term(2, 6, &Offset::new(0, 0, 1), &budget()).unwrap();
        assert!((t + 1.0).abs() < 1e-12, "got {t}");
    }

    #[test]
    fn series_term_is_multiplicative() {
        let h = Offset::new(1, 1, 1);
        for (q1, q2) in [(2u64, 3u64), (3, 4), (2, 9), (4, 5)] {
            let a = series_term(q1, 6, &h, &budget()).unwrap();
            let b = series_term(q2, 6, &h, &budget()).unwrap();
            let ab = series_term(q1 * q2, 6, &h, &budget()).unwrap();
            assert!(
                (a * b - ab).abs() < 1e-9 * ab.abs().max(1.0),
                "A_{q1} A_{q2} = {} vs A_{} = {ab}",
                a * b,
                q1 * q2
            );
        }
    }

    #[test]
    fn euler_routes_agree() {
        let h = Offset::new(1, 1, 1);
        for p in [2u64, 3, 5] {
            for level in 0..=2u32 {
                if p == 5 && level == 2 {
                    continue; // 5^8 ops via sums route only; keep test fast
                }
                let sums = padic_density_via_sums(p, 6, &h, level, &budget()).unwrap();
                let count = padic_density_via_counting(p, 6, &h, level, &budget()).unwrap();
                assert!(
                    (sums.value - count.value).abs() < 1e-10 * count.value.abs().max(1.0),
                    "p={p} H={level}: {} vs {}",
                    sums.value,
                    count.value
                );
            }
        }
    }

    #[test]
    fn level_zero_factor_is_one() {
        let r = padic_density_via_counting(7, 6, &Offset::ZERO, 0, &budget()).unwrap();
        assert_eq!(r.value, 1.0);
        let r = padic_density_via_sums(7, 6, &Offset::ZERO, 0, &budget()).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn composite_p_rejected() {
        assert!(padic_density_via_sums(6, 6, &Offset::ZERO, 1, &budget()).is_err());
        assert!(hensel_nonsingular_search(10, 6, &Offset::ZERO, 2, 1, &budget()).is_err());
    }

    #[test]
    fn series_truncation_reports_tail() {
        let r = singular_series_truncated(6, &Offset::new(1, 1, 1), 20, &budget()).unwrap();
        assert_eq!(r.terms.len(), 20);
        assert!(r.imag_residual < 1e-10);
        assert!(r.value.is_finite());
        // The series at s = 6 converges fast; the fitted tail should be
        // small compared to the value.
        if let Some(tail) = r.tail_estimate {
            assert!(tail.abs() < 0.5 * r.value.abs().max(1.0), "tail = {tail}");
        }
    }

    #[test]
    fn hensel_witness_at_large_prime() {
        let w = hensel_nonsingular_search(7, 6, &Offset::ZERO, 3, 42, &budget())
            .unwrap()
            .expect("7-adic witness must exist for h = 0");
        assert_eq!(w.p, 7);
        assert_eq!(w.depth, 3);
        assert_eq!(w.modulus, 343);
        assert_eq!(w.minor_valuation, 0);
        // Re-verify the system directly.
        assert!(system_holds(&w.x, &w.y, &Offset::ZERO, 7, 3).unwrap());
    }

    #[test]
    fn hensel_witness_at_three() {
        let h = Offset::new(1, 1, 1);
        let w = hensel_nonsingular_search(3, 6, &h, 3, 7, &budget())
            .unwrap()
            .expect("3-adic witness must exist for h = (1,1,1)");
        assert!(w.depth >= 3);
        assert!(w.minor_valuation <= 1);
        assert!(system_holds(&w.x, &w.y, &h, 3, w.depth).unwrap());
    }

    #[test]
    fn hensel_witness_at_two_lifts_deep() {
        let h = Offset::new(2, 0, 2);
        let w = hensel_nonsingular_search(2, 6, &h, 12, 5, &budget())
            .unwrap()
            .expect("2-adic witness must exist for h = (2,0,2)");
        assert!(w.depth >= 12);
        assert!(w.minor_valuation <= 2);
        assert!(system_holds(&w.x, &w.y, &h, 2, w.depth).unwrap());
    }

    #[test]
    fn hensel_rejects_insoluble_offset() {
        // h = (0, 0, 1) violates the parity congruence h3 = h1 mod 2, so
        // no 2-adic solution exists at depth >= 1... mod 2 the system
        // reads sum x - sum y = 0 and = 1 simultaneously (x = x^3 mod 2).
        let w = hensel_nonsingular_search(2, 6, &Offset::new(0, 0, 1), 2, 9, &budget()).unwrap();
        assert!(w.is_none());
    }

    #[test]
    fn primality_helper() {
        let primes: Vec<u64> = (0..20).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }
}
