//! Core domain types: the shift vector, moment vectors, parameter
//! validation, key packing for count tables, and computation budgets.
//!
//! The central object of the library is the counting function
//!
//! ```text
//! B_s(X; h) = #{ x, y in [1,X]^s :
//!                sum_i (x_i^j - y_i^j) = h_j  for j = 1,2,3 }
//! ```
//!
//! This module defines the types that name the pieces of that definition:
//! [`Offset`] is the inhomogeneous shift `h = (h1, h2, h3)`, a
//! [`MomentVector`] is `(sum x_i, sum x_i^2, sum x_i^3)` for a tuple `x`,
//! and [`MomentEncoding`] packs a moment vector into a single `u64` table
//! key using mixed-radix positional encoding.

use crate::error::{Error, Result};

/// Largest number of variables per side we support. The multinomial
/// weights used by the multiset enumerator need `s!` to fit comfortably
/// in a `u64`, and every budget in this crate is tuned for `s <= 8`.
pub const MAX_S: u32 = 8;

/// Factorials `0! ..= 8!`, used for multiset multiplicities.
pub const FACTORIALS: [u64; 9] = [1, 1, 2, 6, 24, 120, 720, 5040, 40320];

/// The inhomogeneous shift `h = (h1, h2, h3)` on the right-hand side of
/// the system: solutions satisfy `sum (x_i^j - y_i^j) = h_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Offset {
    pub h1: i64,
    pub h2: i64,
    pub h3: i64,
}

impl Offset {
    /// The homogeneous case `h = 0`.
    pub const ZERO: Offset = Offset { h1: 0, h2: 0, h3: 0 };

    pub const fn new(h1: i64, h2: i64, h3: i64) -> Self {
        Offset { h1, h2, h3 }
    }

    /// `-h`. Swapping the roles of `x` and `y` negates the shift, so
    /// `B_s(X; -h) = B_s(X; h)`; tests use this symmetry.
    pub const fn negated(self) -> Self {
        Offset {
            h1: -self.h1,
            h2: -self.h2,
            h3: -self.h3,
        }
    }

    /// Components in equation order `[h1, h2, h3]`.
    pub const fn as_array(self) -> [i64; 3] {
        [self.h1, self.h2, self.h3]
    }

    /// The shift produced by translating both sides of the system by `z`:
    /// counting over `[z+1, X+z]` with shift `h` equals counting over
    /// `[1, X]` with this shift. Follows from expanding `(u+z)^j`.
    pub const fn translated(self, z: i64) -> Self {
        Offset {
            h1: self.h1,
            h2: self.h2 + 2 * self.h1 * z,
            h3: self.h3 + 3 * self.h2 * z + 3 * self.h1 * z * z,
        }
    }
}

impl std::fmt::Display for Offset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.h1, self.h2, self.h3)
    }
}

/// Power sums `(m1, m2, m3) = (sum x_i, sum x_i^2, sum x_i^3)` of a tuple
/// with positive entries. All three are nonnegative, hence `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MomentVector {
    pub m1: u64,
    pub m2: u64,
    pub m3: u64,
}

impl MomentVector {
    pub const fn new(m1: u64, m2: u64, m3: u64) -> Self {
        MomentVector { m1, m2, m3 }
    }
}

/// Compute the moment vector of a tuple of positive integers, checking
/// for overflow (relevant only for adversarial inputs; honest parameters
/// stay far below `u64::MAX`).
pub fn moment_of(xs: &[u64]) -> Result<MomentVector> {
    let mut m1: u64 = 0;
    let mut m2: u64 = 0;
    let mut m3: u64 = 0;
    for &x in xs {
        let x2 = x
            .checked_mul(x)
            .ok_or_else(|| Error::Config(format!("entry {x} overflows on squaring")))?;
        let x3 = x2
            .checked_mul(x)
            .ok_or_else(|| Error::Config(format!("entry {x} overflows on cubing")))?;
        m1 = m1
            .checked_add(x)
            .ok_or_else(|| Error::Config("moment m1 overflow".into()))?;
        m2 = m2
            .checked_add(x2)
            .ok_or_else(|| Error::Config("moment m2 overflow".into()))?;
        m3 = m3
            .checked_add(x3)
            .ok_or_else(|| Error::Config("moment m3 overflow".into()))?;
    }
    Ok(MomentVector::new(m1, m2, m3))
}

/// Necessary congruence conditions for solubility with any `s`, derived
/// from `x^3 = x (mod 3)` and `x^3 = x^2 = x (mod 2)`: every solution of
/// the system forces
///
/// * `h3 = h1 (mod 3)`,
/// * `h3 = h2 = h1 (mod 2)`.
///
/// When this returns `false`, `B_s(X; h) = 0` for all `s` and `X`, and the
/// 2-adic or 3-adic local density vanishes.
pub fn congruence_soluble(h: &Offset) -> bool {
    (h.h3 - h.h1) % 3 == 0 && (h.h3 - h.h1) % 2 == 0 && (h.h2 - h.h1) % 2 == 0
}

/// Inclusive bounds `[lo_j, hi_j]` for the `j`-th moment of an `s`-tuple
/// with entries in `[1, X]`: `lo_j = s`, `hi_j = s * X^j`.
pub fn moment_bounds(s: u32, x: u64) -> ([u64; 3], [u64; 3]) {
    let s = s as u64;
    let lo = [s, s, s];
    let hi = [s * x, s * x * x, s * x * x * x];
    (lo, hi)
}

/// Validated `(s, X)` pair for a counting problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Params {
    pub s: u32,
    pub x: u64,
}

impl Params {
    pub fn new(s: u32, x: u64) -> Result<Self> {
        if s == 0 || s > MAX_S {
            return Err(Error::Config(format!(
                "s must be in 1..={MAX_S}, got {s}"
            )));
        }
        if x == 0 {
            return Err(Error::Config("X must be positive".into()));
        }
        Ok(Params { s, x })
    }
}

/// Mixed-radix packing of moment vectors into `u64` table keys.
///
/// For entries in `[1, hi]` and `s` variables the moments range over
/// `[0, s*hi^j]` (we reserve 0 so shifted keys can be formed), so the
/// radices `r_j = s*hi^j + 1` make
/// `key = m1 + r1 * (m2 + r2 * m3)` injective. The constructor verifies
/// in `u128` that `r1 * r2 * r3 <= 2^64`, refusing configurations whose
/// keys would not fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MomentEncoding {
    pub s: u32,
    pub max_entry: u64,
    r1: u64,
    r2: u64,
    r3: u64,
}

impl MomentEncoding {
    pub fn new(s: u32, max_entry: u64) -> Result<Self> {
        if s == 0 || s > MAX_S {
            return Err(Error::Config(format!(
                "s must be in 1..={MAX_S}, got {s}"
            )));
        }
        if max_entry == 0 {
            return Err(Error::Config("max_entry must be positive".into()));
        }
        let s64 = s as u128;
        let m = max_entry as u128;
        let r1 = s64 * m + 1;
        let r2 = s64 * m * m + 1;
        let r3 = s64 * m * m * m + 1;
        let capacity = r1
            .checked_mul(r2)
            .and_then(|p| p.checked_mul(r3))
            .ok_or_else(|| {
                Error::Config(format!(
                    "key space for s={s}, max_entry={max_entry} overflows u128"
                ))
            })?;
        if capacity > (1u128 << 64) {
            return Err(Error::Config(format!(
                "key space for s={s}, max_entry={max_entry} exceeds u64 ({capacity} keys)"
            )));
        }
        Ok(MomentEncoding {
            s,
            max_entry,
            r1: r1 as u64,
            r2: r2 as u64,
            r3: r3 as u64,
        })
    }

    /// Radices `(r1, r2, r3)` of the encoding.
    pub fn radices(&self) -> (u64, u64, u64) {
        (self.r1, self.r2, self.r3)
    }

    /// Pack a moment vector, or `None` if any component is out of range.
    pub fn pack(&self, m: MomentVector) -> Option<u64> {
        if m.m1 >= self.r1 || m.m2 >= self.r2 || m.m3 >= self.r3 {
            return None;
        }
        Some(m.m1 + self.r1 * (m.m2 + self.r2 * m.m3))
    }

    /// Invert [`Self::pack`].
    pub fn unpack(&self, key: u64) -> MomentVector {
        let m1 = key % self.r1;
        let rest = key / self.r1;
        let m2 = rest % self.r2;
        let m3 = rest / self.r2;
        MomentVector::new(m1, m2, m3)
    }

    /// Key of `m + h` (componentwise), or `None` if any shifted component
    /// leaves the encodable range. This is how the twisted pair count
    /// looks up "the moment vector that `y` must hit" without leaving
    /// integer arithmetic.
    pub fn shifted_key(&self, m: MomentVector, h: &Offset) -> Option<u64> {
        let shift = |base: u64, d: i64, radix: u64| -> Option<u64> {
            let v = (base as i128) + (d as i128);
            if v < 0 || v >= radix as i128 {
                None
            } else {
                Some(v as u64)
            }
        };
        let m1 = shift(m.m1, h.h1, self.r1)?;
        let m2 = shift(m.m2, h.h2, self.r2)?;
        let m3 = shift(m.m3, h.h3, self.r3)?;
        Some(m1 + self.r1 * (m2 + self.r2 * m3))
    }
}

/// Cost ceilings for the expensive routines. Each routine estimates its
/// iteration count up front and returns [`Error::Budget`] instead of
/// silently running for hours. Callers with a real need raise the ceiling
/// explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Direct `X^(2s)` enumeration ceiling for the naive pair count.
    pub naive_iterations: u128,
    /// Ceiling on the number of non-decreasing multisets streamed when
    /// building a representation table.
    pub multisets: u128,
    /// Ceiling on distinct moment vectors stored in one table.
    pub table_entries: u128,
    /// Ceiling on inner-loop operations (`~q^4`) for complete
    /// exponential-sum accumulation over residue tuples.
    pub series_ops: u128,
    /// Ceiling on random trials in the nonsingular-witness search.
    pub search_trials: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            naive_iterations: 1_000_000_000,
            multisets: 100_000_000,
            table_entries: 100_000_000,
            series_ops: 4_000_000_000,
            search_trials: 4_000_000,
        }
    }
}

impl Budget {
    /// Check `required <= limit`, reporting the offending quantity.
    pub fn check(what: &'static str, required: u128, limit: u128) -> Result<()> {
        if required > limit {
            Err(Error::Budget {
                what,
                required,
                limit,
            })
        } else {
            Ok(())
        }
    }
}
