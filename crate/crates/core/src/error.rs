//! Crate-wide error types.

use thiserror::Error;

/// Errors surfaced by any of the library modules.
#[derive(Debug, Error)]
pub enum Error {
    /// A modulus of zero was supplied.
    #[error("modulus must be a positive integer")]
    InvalidModulus,

    /// A precondition on the arguments was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation was requested at a pole (ζ(s,a) or a principal L-function at s = 1).
    #[error("pole at s = {0}")]
    Pole(f64),

    /// The requested tolerance could not be met with the configured
    /// Euler–Maclaurin depth.
    #[error("requested tolerance {requested:e} unattainable (best bound {achieved:e})")]
    Precision { requested: f64, achieved: f64 },

    /// `L(1/2,χ)·L(1/2,χχ₋₄)` came out negative beyond the error bounds.
    /// Diagnostic only: this cannot happen if the relevant L-functions have no
    /// real zero in (1/2, 1).
    #[error("L-value product {0} negative beyond error bounds")]
    NegativeLProduct(f64),

    /// A resource limit was exceeded (range too large, missing sieve data, …).
    #[error("resource error: {0}")]
    Resource(String),

    /// Sieve cache (de)serialization failure.
    #[error("cache error: {0}")]
    Cache(#[from] CacheError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Distinct failure modes when loading a cached sieve block.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CacheError {
    #[error("bad magic (not a sieve cache file)")]
    BadMagic,
    #[error("unsupported format version {found} (expected {expected})")]
    Version { found: u8, expected: u8 },
    #[error("checksum mismatch (file corrupted)")]
    Checksum,
    #[error("file truncated: expected {expected} bytes, got {found}")]
    Truncated { expected: usize, found: usize },
}
