//! Exact counting and circle-method numerics for the shifted cubic
//! moment system
//!
//! ```text
//! sum_{i=1}^{s} (x_i - y_i)     = h1
//! sum_{i=1}^{s} (x_i^2 - y_i^2) = h2
//! sum_{i=1}^{s} (x_i^3 - y_i^3) = h3,      1 <= x_i, y_i <= X.
//! ```
//!
//! The library has two halves that check each other:
//!
//! * **Exact integer counting** ([`count`]): representation tables over
//!   moment vectors, twisted pair counts `B_s(X; h)`, and the auxiliary
//!   quadratic/mixed counts that arise when one equation degenerates.
//! * **Analytic machinery** ([`expsum`], [`arcs`], [`local`], [`integral`]):
//!   the generating exponential sum and its major-arc approximant, the
//!   Farey/box dissections of the unit cube, p-adic local densities with
//!   two independently computed routes, and the real-place singular
//!   integral with a Monte Carlo cross-check.
//!
//! Everything is deterministic: randomized probes take explicit seeds and
//! all floating-point reductions are sequential, so identical inputs give
//! bit-identical outputs.

pub mod arcs;
pub mod count;
pub mod domain;
pub mod error;
pub mod expsum;
pub mod integral;
pub mod local;

pub use domain::{
    congruence_soluble, moment_bounds, moment_of, Budget, MomentEncoding, MomentVector, Offset,
    Params,
};
pub use error::{Error, Result};
