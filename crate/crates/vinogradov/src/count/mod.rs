//! Exact counting of `B_s(X; h)` and the related degenerate systems.
//!
//! The centerpiece is the meet-in-the-middle identity
//!
//! ```text
//! B_s(X; h) = sum_m r_s(m) * r_s(m + h)
//! ```
//!
//! where `r_s(m)` is the number of `x` in `[1,X]^s` with moment vector
//! `m = (sum x_i, sum x_i^2, sum x_i^3)`. A [`RepresentationTable`] holds
//! `r_s` keyed by the packed moment; pairing the table against its
//! `h`-shifted self gives the count in `O(table size)` after an
//! `O(multisets)` build, instead of `O(X^(2s))`.
//!
//! A deliberately simpleminded [`count_naive`] enumerates all `X^(2s)`
//! pairs and serves as the independent oracle the table route is tested
//! against. The degenerate two- and one-equation systems that arise from
//! the second-moment analysis (`T0`, the mixed six-variable system, and
//! the eight-variable twisted moment) are counted here too, by the same
//! table technique over fewer moments.

mod cache;
mod table;

pub use cache::{read_table, write_table, CACHE_MAGIC};
pub use table::PackedCountTable;

use crate::domain::{
    moment_of, Budget, MomentEncoding, MomentVector, Offset, Params, FACTORIALS,
};
use crate::error::{Error, Result};
use std::time::{Duration, Instant};

/// Outcome of a counting run, tagged with the strategy that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub value: u128,
    pub s: u32,
    pub x: u64,
    pub h: Offset,
    pub elapsed: Duration,
    /// `"table"` (meet-in-the-middle) or `"naive"` (direct enumeration).
    pub method: &'static str,
}

/// Number of multisets of size `s` from a universe of `n` values:
/// `C(n + s - 1, s)`.
pub fn multiset_count(n: u64, s: u32) -> u128 {
    let mut num: u128 = 1;
    let n = n as u128;
    let s = s as u128;
    for i in 0..s {
        num *= n + s - 1 - i;
    }
    num / FACTORIALS[s as usize] as u128
}

/// Stream all non-decreasing `s`-tuples over `[lo, hi]` in lexicographic
/// order, invoking `f(tuple, weight)` with the multinomial weight
/// `s! / prod(run length)!` — the number of distinct orderings of the
/// multiset. The enumeration is checked against `budget.multisets` before
/// any work happens.
fn for_each_multiset<F>(s: u32, lo: u64, hi: u64, budget: &Budget, mut f: F) -> Result<()>
where
    F: FnMut(&[u64], u64) -> Result<()>,
{
    debug_assert!(lo >= 1 && lo <= hi);
    Budget::check(
        "multiset enumeration",
        multiset_count(hi - lo + 1, s),
        budget.multisets,
    )?;
    let s = s as usize;
    let mut t = vec![lo; s];
    loop {
        // Multinomial weight from run lengths of equal entries.
        let mut weight = FACTORIALS[s];
        let mut run = 1usize;
        for i in 1..s {
            if t[i] == t[i - 1] {
                run += 1;
            } else {
                weight /= FACTORIALS[run];
                run = 1;
            }
        }
        weight /= FACTORIALS[run];
        f(&t, weight)?;

        // Advance: bump the rightmost entry below hi, reset the suffix.
        match (0..s).rev().find(|&i| t[i] < hi) {
            Some(i) => {
                t[i] += 1;
                let v = t[i];
                for slot in t.iter_mut().skip(i + 1) {
                    *slot = v;
                }
            }
            None => return Ok(()),
        }
    }
}

/// The representation function `r_s` over `[lo, hi]`, stored as packed
/// moment keys with multiplicities. `lo = 1` is the standard range; the
/// shift-identity verifier builds tables over `[z+1, X+z]`.
#[derive(Debug, Clone)]
pub struct RepresentationTable {
    pub s: u32,
    pub lo: u64,
    pub hi: u64,
    pub encoding: MomentEncoding,
    table: PackedCountTable,
    /// Total mass `sum_m r_s(m) = (hi - lo + 1)^s`.
    pub total: u128,
}

impl RepresentationTable {
    /// Build the table for the standard range `[1, X]`.
    pub fn build(params: Params, budget: &Budget) -> Result<Self> {
        Self::build_over_range(params.s, 1, params.x, budget)
    }

    /// Build the table for entries in `[lo, hi]`.
    pub fn build_over_range(s: u32, lo: u64, hi: u64, budget: &Budget) -> Result<Self> {
        if lo == 0 || lo > hi {
            return Err(Error::Config(format!("bad entry range [{lo}, {hi}]")));
        }
        let encoding = MomentEncoding::new(s, hi)?;
        let expected = multiset_count(hi - lo + 1, s);
        Budget::check("table entries", expected, budget.table_entries)?;
        let mut table = PackedCountTable::with_capacity(expected.min(1 << 24) as usize);
        let mut total: u128 = 0;
        for_each_multiset(s, lo, hi, budget, |t, w| {
            let m = moment_of(t)?;
            let key = encoding
                .pack(m)
                .ok_or_else(|| Error::Config("moment escaped encoding range".into()))?;
            table.add(key, w);
            total += w as u128;
            Ok(())
        })?;
        debug_assert_eq!(total, ((hi - lo + 1) as u128).pow(s));
        Ok(RepresentationTable {
            s,
            lo,
            hi,
            encoding,
            table,
            total,
        })
    }

    /// Reassemble a table from entries (used by the cache reader). The
    /// caller is responsible for having validated mass and key bounds.
    pub(crate) fn from_entries(
        s: u32,
        x: u64,
        entries: &[(u64, u64)],
        total: u128,
    ) -> Result<Self> {
        let encoding = MomentEncoding::new(s, x)?;
        let mut table = PackedCountTable::with_capacity(entries.len());
        for &(key, mult) in entries {
            table.add(key, mult);
        }
        Ok(RepresentationTable {
            s,
            lo: 1,
            hi: x,
            encoding,
            table,
            total,
        })
    }

    /// `r_s(m)`: how many tuples have moment vector `m`.
    pub fn multiplicity(&self, m: MomentVector) -> u64 {
        match self.encoding.pack(m) {
            Some(key) => self.table.get(key),
            None => 0,
        }
    }

    /// Number of distinct moment vectors.
    pub fn distinct_moments(&self) -> usize {
        self.table.len()
    }

    /// Iterate over `(packed key, multiplicity)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.table.iter()
    }

    /// The twisted autocorrelation `sum_m r(m) * r(m + h)`: the number of
    /// pairs `(x, y)` over the table's range with `moment(x) - moment(y) = h`.
    pub fn twisted_pair_count(&self, h: &Offset) -> u128 {
        let mut count: u128 = 0;
        for (key, w) in self.table.iter() {
            let m = self.encoding.unpack(key);
            if let Some(shifted) = self.encoding.shifted_key(m, h) {
                let partner = self.table.get(shifted);
                if partner != 0 {
                    count += w as u128 * partner as u128;
                }
            }
        }
        count
    }
}

/// `B_s(X; h)` via the representation table.
pub fn count_solutions(params: Params, h: &Offset, budget: &Budget) -> Result<CountResult> {
    let start = Instant::now();
    let table = RepresentationTable::build(params, budget)?;
    let value = table.twisted_pair_count(h);
    Ok(CountResult {
        value,
        s: params.s,
        x: params.x,
        h: *h,
        elapsed: start.elapsed(),
        method: "table",
    })
}

/// `B_s(X; h)` by direct enumeration of all `X^(2s)` pairs `(x, y)`.
/// Exists solely to keep the table route honest.
pub fn count_naive(params: Params, h: &Offset, budget: &Budget) -> Result<CountResult> {
    let start = Instant::now();
    let (s, x) = (params.s, params.x);
    let tuples = (x as u128).pow(s);
    Budget::check("naive iterations", tuples.saturating_mul(tuples), budget.naive_iterations)?;

    // Materialize the moment vectors of all X^s tuples once (X^s <=
    // sqrt(budget), so this is small), then walk the full cross product.
    let n = tuples as usize;
    let mut m1 = Vec::with_capacity(n);
    let mut m2 = Vec::with_capacity(n);
    let mut m3 = Vec::with_capacity(n);
    let mut t = vec![1u64; s as usize];
    loop {
        let m = moment_of(&t)?;
        m1.push(m.m1 as i64);
        m2.push(m.m2 as i64);
        m3.push(m.m3 as i64);
        match (0..s as usize).rev().find(|&i| t[i] < x) {
            Some(i) => {
                t[i] += 1;
                for slot in t.iter_mut().skip(i + 1) {
                    *slot = 1;
                }
            }
            None => break,
        }
    }
    let mut value: u128 = 0;
    for i in 0..n {
        let (a1, a2, a3) = (m1[i] - h.h1, m2[i] - h.h2, m3[i] - h.h3);
        for j in 0..n {
            if m1[j] == a1 && m2[j] == a2 && m3[j] == a3 {
                value += 1;
            }
        }
    }
    Ok(CountResult {
        value,
        s,
        x,
        h: *h,
        elapsed: start.elapsed(),
        method: "naive",
    })
}

/// Check the translation identity: counting the shifted system over
/// `[z+1, X+z]` with right-hand side `(h1, h2 + 2 h1 z, h3 + 3 h2 z + 3 h1 z^2)`
/// must reproduce `B_s(X; h)`.
pub fn verify_shift_identity(params: Params, h: &Offset, z: u64, budget: &Budget) -> Result<bool> {
    if z == 0 || z > params.x {
        return Err(Error::Config(format!(
            "shift z must satisfy 1 <= z <= X, got z={z}, X={}",
            params.x
        )));
    }
    let base = count_solutions(params, h, budget)?;
    let shifted_table =
        RepresentationTable::build_over_range(params.s, z + 1, params.x + z, budget)?;
    let shifted = shifted_table.twisted_pair_count(&h.translated(z as i64));
    Ok(base.value == shifted)
}

/// `T0(X)`: solutions of the two-equation quadratic system
/// `sum(x_i - y_i) = 0`, `sum(x_i^2 - y_i^2) = 0` with `x, y` in `[1,X]^3`.
/// Counted by a two-moment table: `T0 = sum_(m1,m2) r(m1,m2)^2`.
pub fn count_quadratic_t0(x: u64, budget: &Budget) -> Result<u128> {
    if x == 0 {
        return Err(Error::Config("X must be positive".into()));
    }
    // Two-moment packing: key = m1 + (3X + 1) * m2. Validate the key space.
    let r1 = 3u128 * x as u128 + 1;
    let r2 = 3u128 * (x as u128) * (x as u128) + 1;
    if r1 * r2 > 1 << 64 {
        return Err(Error::Config(format!(
            "two-moment key space for X={x} exceeds u64"
        )));
    }
    let r1 = r1 as u64;
    let mut table = PackedCountTable::with_capacity(multiset_count(x, 3).min(1 << 24) as usize);
    for_each_multiset(3, 1, x, budget, |t, w| {
        let (mut m1, mut m2) = (0u64, 0u64);
        for &v in t {
            m1 += v;
            m2 += v * v;
        }
        table.add(m1 + r1 * m2, w);
        Ok(())
    })?;
    Ok(table.iter().map(|(_, w)| w as u128 * w as u128).sum())
}

/// The mixed six-variable system from the second-moment analysis:
/// `2 h1 * D1 = 0` and `3 h2 * D1 + 3 h1 * D2 = 0`, where
/// `D_j = sum(x_i^j - y_i^j)` over triples `x, y` in `[1,X]^3`.
///
/// Case analysis on which equations are active:
/// * `h1 != 0`: both `D1 = 0` and `D2 = 0` are forced — this is `T0(X)`.
/// * `h1 = 0, h2 != 0`: only `D1 = 0` survives — a sum-match count.
/// * `h = (0,0,*)`: no constraint — all `X^6` pairs.
pub fn count_mixed_g6(x: u64, h: &Offset, budget: &Budget) -> Result<u128> {
    if x == 0 {
        return Err(Error::Config("X must be positive".into()));
    }
    if h.h1 != 0 {
        return count_quadratic_t0(x, budget);
    }
    if h.h2 != 0 {
        // sum_k (#triples with sum k)^2, k in [3, 3X]: dense array.
        let mut r1 = vec![0u64; (3 * x + 1) as usize];
        for_each_multiset(3, 1, x, budget, |t, w| {
            r1[(t[0] + t[1] + t[2]) as usize] += w;
            Ok(())
        })?;
        return Ok(r1.iter().map(|&w| w as u128 * w as u128).sum());
    }
    Ok((x as u128).pow(6))
}

/// The eight-variable twisted moment count: solutions of
/// `x = y`, `x^2 - y^2 + 2 h1 * D1 = 0`, `x^3 - y^3 + 3 h2 * D1 + 3 h1 * D2 = 0`
/// with `x, y` in `[1, 2X]` and the `D_j` over triples `u, v` in `[1,X]^3`.
/// The first equation forces `x = y`, so the count factors as
/// `2X * count_mixed_g6(X, h)`; the triple side is still counted by
/// meet-in-the-middle tables.
pub fn count_twisted_moment_theta1(x: u64, h: &Offset, budget: &Budget) -> Result<u128> {
    Ok(2 * x as u128 * count_mixed_g6(x, h, budget)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{congruence_soluble, moment_bounds};

    fn params(s: u32, x: u64) -> Params {
        Params::new(s, x).unwrap()
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multiset_count(2, 2), 3);
        assert_eq!(multiset_count(10, 6), 5005);
        assert_eq!(multiset_count(1, 8), 1);
    }

    #[test]
    fn table_small_cases_by_hand() {
        let b = Budget::default();
        // s=1, X=2: exactly the two singleton moments.
        let t = RepresentationTable::build(params(1, 2), &b).unwrap();
        assert_eq!(t.distinct_moments(), 2);
        assert_eq!(t.multiplicity(MomentVector::new(1, 1, 1)), 1);
        assert_eq!(t.multiplicity(MomentVector::new(2, 4, 8)), 1);

        // s=2, X=2: {(2,2,2):1, (3,5,9):2, (4,8,16):1}.
        let t = RepresentationTable::build(params(2, 2), &b).unwrap();
        assert_eq!(t.distinct_moments(), 3);
        assert_eq!(t.multiplicity(MomentVector::new(2, 2, 2)), 1);
        assert_eq!(t.multiplicity(MomentVector::new(3, 5, 9)), 2);
        assert_eq!(t.multiplicity(MomentVector::new(4, 8, 16)), 1);
        assert_eq!(t.total, 4);
    }

    #[test]
    fn table_mass_conservation() {
        let b = Budget::default();
        for (s, x) in [(1u32, 7u64), (2, 5), (3, 4), (6, 3), (6, 10)] {
            let t = RepresentationTable::build(params(s, x), &b).unwrap();
            assert_eq!(t.total, (x as u128).pow(s), "mass for s={s}, X={x}");
            let from_iter: u128 = t.iter().map(|(_, w)| w as u128).sum();
            assert_eq!(from_iter, t.total);
            // Extreme moments are represented exactly once.
            let (lo, hi) = moment_bounds(s, x);
            assert_eq!(t.multiplicity(MomentVector::new(lo[0], lo[1], lo[2])), 1);
            assert_eq!(t.multiplicity(MomentVector::new(hi[0], hi[1], hi[2])), 1);
        }
    }

    #[test]
    fn count_examples_frozen() {
        let b = Budget::default();
        // Only (x, y) = (2, 1) realizes h = (1, 3, 7) at s=1, X=2.
        assert_eq!(
            count_solutions(params(1, 2), &Offset::new(1, 3, 7), &b)
                .unwrap()
                .value,
            1
        );
        // X = 1 forces every variable to 1.
        for s in 1..=8 {
            assert_eq!(
                count_solutions(params(s, 1), &Offset::ZERO, &b).unwrap().value,
                1
            );
        }
        // Parity obstruction kills h = (0,0,1).
        assert!(!congruence_soluble(&Offset::new(0, 0, 1)));
        assert_eq!(
            count_solutions(params(6, 8), &Offset::new(0, 0, 1), &b)
                .unwrap()
                .value,
            0
        );
        // Naive-oracle values.
        assert_eq!(
            count_naive(params(1, 3), &Offset::ZERO, &b).unwrap().value,
            3
        );
        assert_eq!(
            count_naive(params(2, 2), &Offset::ZERO, &b).unwrap().value,
            6
        );
        assert_eq!(
            count_naive(params(1, 2), &Offset::new(1, 3, 7), &b)
                .unwrap()
                .value,
            1
        );
    }

    #[test]
    fn oracle_equivalence_spot_checks() {
        let b = Budget::default();
        for (s, x) in [(1u32, 5u64), (2, 4), (3, 3)] {
            for h in [
                Offset::ZERO,
                Offset::new(1, 1, 1),
                Offset::new(-2, 0, 2),
                Offset::new(0, 2, 0),
                Offset::new(3, -1, 5),
            ] {
                let fast = count_solutions(params(s, x), &h, &b).unwrap().value;
                let slow = count_naive(params(s, x), &h, &b).unwrap().value;
                assert_eq!(fast, slow, "s={s}, X={x}, h={h}");
            }
        }
    }

    #[test]
    fn symmetry_under_negation() {
        let b = Budget::default();
        for h in [
            Offset::new(1, 2, 3),
            Offset::new(-1, 4, -2),
            Offset::new(2, 0, 2),
        ] {
            let plus = count_solutions(params(3, 4), &h, &b).unwrap().value;
            let minus = count_solutions(params(3, 4), &h.negated(), &b)
                .unwrap()
                .value;
            assert_eq!(plus, minus, "h={h}");
        }
    }

    #[test]
    fn monotone_in_x_and_cauchy_schwarz() {
        let b = Budget::default();
        let h = Offset::new(1, 1, 1);
        let mut prev = 0u128;
        for x in 2..=6 {
            let v = count_solutions(params(2, x), &h, &b).unwrap().value;
            assert!(v >= prev, "X={x}");
            prev = v;
            let homog = count_solutions(params(2, x), &Offset::ZERO, &b)
                .unwrap()
                .value;
            assert!(v <= homog, "Cauchy-Schwarz at X={x}");
        }
    }

    #[test]
    fn mass_over_all_offsets() {
        // Summing B_s(X;h) over every achievable h recovers X^(2s).
        let b = Budget::default();
        let p = params(2, 3);
        let table = RepresentationTable::build(p, &b).unwrap();
        let mut sum: u128 = 0;
        let (lo, hi) = moment_bounds(p.s, p.x);
        for h1 in -((hi[0] - lo[0]) as i64)..=(hi[0] - lo[0]) as i64 {
            for h2 in -((hi[1] - lo[1]) as i64)..=(hi[1] - lo[1]) as i64 {
                for h3 in -((hi[2] - lo[2]) as i64)..=(hi[2] - lo[2]) as i64 {
                    sum += table.twisted_pair_count(&Offset::new(h1, h2, h3));
                }
            }
        }
        assert_eq!(sum, (p.x as u128).pow(2 * p.s));
    }

    #[test]
    fn shift_identity_cases() {
        let b = Budget::default();
        assert!(verify_shift_identity(params(1, 2), &Offset::new(1, 3, 7), 1, &b).unwrap());
        assert!(verify_shift_identity(params(2, 3), &Offset::ZERO, 2, &b).unwrap());
        assert!(verify_shift_identity(params(3, 4), &Offset::new(2, 0, 2), 3, &b).unwrap());
        // z out of range is a configuration error.
        assert!(verify_shift_identity(params(2, 3), &Offset::ZERO, 4, &b).is_err());
        assert!(verify_shift_identity(params(2, 3), &Offset::ZERO, 0, &b).is_err());
    }

    /// Brute-force count of the two-equation quadratic system, for
    /// freezing T0 values independently of the table machinery.
    fn t0_brute(x: u64) -> u128 {
        let mut triples = Vec::new();
        for a in 1..=x {
            for b in 1..=x {
                for c in 1..=x {
                    triples.push((a + b + c, a * a + b * b + c * c));
                }
            }
        }
        let mut count = 0u128;
        for p in &triples {
            for q in &triples {
                if p == q {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn quadratic_t0_values() {
        let b = Budget::default();
        assert_eq!(count_quadratic_t0(1, &b).unwrap(), 1);
        // X=2: classifying triples by the number of 2-entries shows both
        // moments depend only on that number, so T0(2) = sum_k C(3,k)^2
        // = C(6,3) = 20; the brute force agrees.
        assert_eq!(t0_brute(2), 20);
        assert_eq!(count_quadratic_t0(2, &b).unwrap(), 20);
        for x in 1..=6 {
            assert_eq!(count_quadratic_t0(x, &b).unwrap(), t0_brute(x), "X={x}");
        }
    }

    /// Brute-force count of the mixed six-variable system straight from
    /// its defining equations.
    fn g6_brute(x: u64, h: &Offset) -> u128 {
        let mut triples = Vec::new();
        for a in 1..=x as i64 {
            for b in 1..=x as i64 {
                for c in 1..=x as i64 {
                    triples.push((a + b + c, a * a + b * b + c * c));
                }
            }
        }
        let mut count = 0u128;
        for p in &triples {
            for q in &triples {
                let d1 = p.0 - q.0;
                let d2 = p.1 - q.1;
                if 2 * h.h1 * d1 == 0 && 3 * h.h2 * d1 + 3 * h.h1 * d2 == 0 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn mixed_g6_values() {
        let b = Budget::default();
        // h1 != 0 reduces to T0.
        assert_eq!(count_mixed_g6(2, &Offset::new(1, 0, 0), &b).unwrap(), 20);
        assert_eq!(
            count_mixed_g6(4, &Offset::new(-3, 5, 9), &b).unwrap(),
            count_quadratic_t0(4, &b).unwrap()
        );
        // h1 = 0, h2 != 0: sum-match count; frozen value at X=3.
        assert_eq!(g6_brute(3, &Offset::new(0, 1, 0)), 141);
        assert_eq!(count_mixed_g6(3, &Offset::new(0, 1, 0), &b).unwrap(), 141);
        // No active equation.
        assert_eq!(count_mixed_g6(2, &Offset::new(0, 0, 5), &b).unwrap(), 64);
        // X = 1 is a single solution for every h.
        for h in [Offset::ZERO, Offset::new(1, 0, 0), Offset::new(0, 3, 1)] {
            assert_eq!(count_mixed_g6(1, &h, &b).unwrap(), 1);
        }
        // Case analysis matches brute force across regimes.
        for x in 1..=3 {
            for h in [
                Offset::ZERO,
                Offset::new(1, 0, 0),
                Offset::new(0, 1, 0),
                Offset::new(2, -1, 3),
                Offset::new(0, 0, 4),
            ] {
                assert_eq!(count_mixed_g6(x, &h, &b).unwrap(), g6_brute(x, &h), "X={x}, h={h}");
            }
        }
    }

    /// Brute force over the full eight-variable system, straight from the
    /// defining equations (x, y in [1, 2X]; u, v in [1, X]^3).
    fn theta1_brute(x: u64, h: &Offset) -> u128 {
        let xi = x as i64;
        let mut triples = Vec::new();
        for a in 1..=xi {
            for b in 1..=xi {
                for c in 1..=xi {
                    triples.push((a + b + c, a * a + b * b + c * c));
                }
            }
        }
        let mut count = 0u128;
        for xv in 1..=2 * xi {
            for yv in 1..=2 * xi {
                if xv != yv {
                    continue;
                }
                for p in &triples {
                    for q in &triples {
                        let d1 = p.0 - q.0;
                        let d2 = p.1 - q.1;
                        let e2 = xv * xv - yv * yv + 2 * h.h1 * d1;
                        let e3 = xv * xv * xv - yv * yv * yv + 3 * h.h2 * d1 + 3 * h.h1 * d2;
                        if e2 == 0 && e3 == 0 {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn twisted_moment_theta1_values() {
        let b = Budget::default();
        // X=1, h=(1,0,0): x = y in [1,2], u = v = (1,1,1).
        assert_eq!(
            count_twisted_moment_theta1(1, &Offset::new(1, 0, 0), &b).unwrap(),
            2
        );
        // X=2, h=(1,0,0): brute force gives 2X * T0(2) = 4 * 20 = 80.
        assert_eq!(theta1_brute(2, &Offset::new(1, 0, 0)), 80);
        assert_eq!(
            count_twisted_moment_theta1(2, &Offset::new(1, 0, 0), &b).unwrap(),
            80
        );
        for x in 1..=3 {
            for h in [Offset::new(1, 0, 0), Offset::new(0, 1, 0), Offset::ZERO] {
                assert_eq!(
                    count_twisted_moment_theta1(x, &h, &b).unwrap(),
                    theta1_brute(x, &h),
                    "X={x}, h={h}"
                );
            }
        }
    }

    #[test]
    fn budget_refusals() {
        let tight = Budget {
            naive_iterations: 10,
            multisets: 5,
            ..Budget::default()
        };
        assert!(matches!(
            count_naive(params(2, 3), &Offset::ZERO, &tight),
            Err(Error::Budget { .. })
        ));
        assert!(matches!(
            RepresentationTable::build(params(3, 10), &tight),
            Err(Error::Budget { .. })
        ));
    }
}
