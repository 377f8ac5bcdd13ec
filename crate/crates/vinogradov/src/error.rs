//! Error type shared across the library.

use thiserror::Error;

/// Errors produced by counting, caching, and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter combination the library refuses to work with
    /// (e.g. `s` out of range, an encoding that cannot fit in a key).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A computation was refused because its cost estimate exceeds the
    /// configured budget. Raising the budget is the caller's decision,
    /// not ours.
    #[error("budget exceeded for {what}: required {required}, limit {limit}")]
    Budget {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    /// A cache file failed validation (bad magic, corrupt layout,
    /// inconsistent totals).
    #[error("cache error: {0}")]
    Cache(String),

    /// Underlying IO failure while reading or writing a cache file.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
