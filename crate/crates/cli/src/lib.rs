//! Command-line front end for the `vinogradov` library.
//!
//! The binary logic lives in a library crate so integration tests can
//! drive commands directly and compare their machine-readable records
//! without spawning processes.

pub mod commands;
pub mod config;
pub mod record;
pub mod suite;
