//! Residue-class races for sums of two squares.
//!
//! Everything needed to run the desk-scale experiments lives here:
//!
//! * [`characters`] — Dirichlet character groups modulo `q`, stored as exact
//!   root-of-unity exponent tables, with the mod-4 twist and quadratic-residue
//!   classification.
//! * [`lfunc`] — Hurwitz zeta and Dirichlet L-values at real `s > 0` via
//!   Euler–Maclaurin with explicit remainder bounds.
//! * [`constants`] — the Landau–Ramanujan constant, `Γ(1/4)`, the race
//!   constants `C_q`, `C_{q,a,b}` and `D_{q,a,b}`, and the Euler-factor
//!   verification of the generating-function identity.
//! * [`sieve`] — segmented, bit-packed sieves for the sum-of-two-squares
//!   indicator (two independent methods) and the additive functions ω and Ω,
//!   with a versioned, checksummed disk cache.
//! * [`race`] — streaming accumulation of per-residue counts, lead-set
//!   densities, and comparison against the predicted main term.
//!
//! With the default `parallel` feature, segments are sieved on a rayon worker
//! pool; without it everything runs sequentially on one thread.

pub mod arith;
pub mod characters;
pub mod constants;
pub mod error;
pub mod lfunc;
pub mod race;
pub mod sieve;

pub use characters::{build_group, Character, CharacterGroup};
pub use error::{CacheError, Error};
pub use race::{BiasReport, RaceSeries, Weight};
pub use sieve::SieveBlock;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
