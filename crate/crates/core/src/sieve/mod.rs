//! Segmented sieves for the sum-of-two-squares indicator and the additive
//! functions ω, Ω.
//!
//! Two independent methods produce the indicator of S:
//!
//! * **lattice marking** — set the bit of every `a² + b²` in the range
//!   (`0²` counts as a square, so perfect squares are members). O(N) marks,
//!   branch-light, the production path;
//! * **multiplicative** — a number is in S iff every prime `p ≡ 3 (mod 4)`
//!   divides it to an even power; checked by dividing out base primes and
//!   inspecting the residual cofactor. The validation oracle.
//!
//! ω/Ω come from one factorization pass per segment: each base prime adds 1
//! (ω) and its exponent (Ω) at its multiples; a residual cofactor `> 1` is a
//! single prime above the segment's square-root bound and adds 1 to both.
//!
//! Segments are independent work units; with the `parallel` feature they are
//! populated on a rayon pool. Completed blocks are immutable.

pub mod cache;

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Default segment length (one bit plus two bytes per integer).
pub const DEFAULT_SEGMENT_LEN: u64 = 1 << 24;

/// Largest supported sieve bound. The factorization passes keep residual
/// cofactors in `u32`, and ranges near 10^9 are already out of desk scale.
pub const MAX_SIEVE_LIMIT: u64 = (1 << 31) - 1;

/// Which per-integer weight a counting pass accumulates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    /// 1 if `n` is a sum of two squares, else 0.
    IndicatorS,
    /// Number of distinct prime factors.
    Omega,
    /// Number of prime factors with multiplicity.
    BigOmega,
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Weight::IndicatorS => "indicator_s",
            Weight::Omega => "omega",
            Weight::BigOmega => "big_omega",
        })
    }
}

impl std::str::FromStr for Weight {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "s" | "indicator-s" | "indicator_s" => Ok(Weight::IndicatorS),
            "omega" => Ok(Weight::Omega),
            "big-omega" | "big_omega" => Ok(Weight::BigOmega),
            other => Err(format!(
                "unknown weight {other:?} (expected indicator-s, omega or big-omega)"
            )),
        }
    }
}

/// A populated half-open range `[lo, hi)` of sieve data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveBlock {
    pub(crate) lo: u64,
    pub(crate) hi: u64,
    /// Bit `k` set ⇔ `lo + k ∈ S`.
    pub(crate) in_s: Vec<u64>,
    pub(crate) omega: Vec<u8>,
    pub(crate) big_omega: Vec<u8>,
}

impl SieveBlock {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> u64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    /// Indicator of S at absolute position `n ∈ [lo, hi)`.
    pub fn in_s(&self, n: u64) -> bool {
        assert!(n >= self.lo && n < self.hi, "n = {n} outside block");
        get_bit(&self.in_s, (n - self.lo) as usize)
    }

    pub fn omega(&self, n: u64) -> u8 {
        assert!(n >= self.lo && n < self.hi, "n = {n} outside block");
        self.omega[(n - self.lo) as usize]
    }

    pub fn big_omega(&self, n: u64) -> u8 {
        assert!(n >= self.lo && n < self.hi, "n = {n} outside block");
        self.big_omega[(n - self.lo) as usize]
    }

    /// Weight of `n` under the given counting mode.
    pub fn weight(&self, n: u64, weight: Weight) -> u64 {
        match weight {
            Weight::IndicatorS => self.in_s(n) as u64,
            Weight::Omega => self.omega(n) as u64,
            Weight::BigOmega => self.big_omega(n) as u64,
        }
    }

    /// Popcount of the S-indicator over the whole block.
    pub fn count_in_s(&self) -> u64 {
        self.in_s.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub(crate) fn bit_at(&self, k: usize) -> bool {
        get_bit(&self.in_s, k)
    }

    pub(crate) fn omega_slice(&self) -> &[u8] {
        &self.omega
    }

    pub(crate) fn big_omega_slice(&self) -> &[u8] {
        &self.big_omega
    }
}

fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

#[inline]
fn set_bit(bits: &mut [u64], k: usize) {
    bits[k >> 6] |= 1 << (k & 63);
}

#[inline]
fn clear_bit(bits: &mut [u64], k: usize) {
    bits[k >> 6] &= !(1 << (k & 63));
}

#[inline]
fn get_bit(bits: &[u64], k: usize) -> bool {
    bits[k >> 6] >> (k & 63) & 1 == 1
}

fn check_range(lo: u64, hi: u64) -> Result<()> {
    if lo < 1 || lo >= hi {
        return Err(Error::Domain(format!(
            "range [{lo}, {hi}) must satisfy 1 ≤ lo < hi"
        )));
    }
    if hi - 1 > MAX_SIEVE_LIMIT {
        return Err(Error::Resource(format!(
            "sieve bound {} exceeds supported maximum {MAX_SIEVE_LIMIT}",
            hi - 1
        )));
    }
    Ok(())
}

fn ceil_sqrt(x: u64) -> u64 {
    let r = x.isqrt();
    if r * r < x {
        r + 1
    } else {
        r
    }
}

/// Simple sieve of Eratosthenes; the base primes for segmented passes.
pub fn base_primes(limit: u64) -> Vec<u32> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for n in 2..=limit {
        if !composite[n] {
            primes.push(n as u32);
            for m in (n * n..=limit).step_by(n) {
                composite[m] = true;
            }
        }
    }
    primes
}

/// S-indicator over `[lo, hi)` by marking every lattice sum `a² + b²`
/// (`a, b ≥ 0`, `a ≤ b`).
pub fn sieve_two_squares_lattice(lo: u64, hi: u64) -> Result<Vec<u64>> {
    check_range(lo, hi)?;
    let len = (hi - lo) as usize;
    let mut bits = vec![0u64; words_for(len)];
    let max_a = ((hi - 1) / 2).isqrt();
    for a in 0..=max_a {
        let a2 = a * a;
        let mut b = if lo > a2 { ceil_sqrt(lo - a2) } else { 0 }.max(a);
        let mut n = a2 + b * b;
        while n < hi {
            set_bit(&mut bits, (n - lo) as usize);
            n += 2 * b + 1;
            b += 1;
        }
    }
    Ok(bits)
}

/// S-indicator over `[lo, hi)` from the multiplicative characterization:
/// excluded iff some prime `p ≡ 3 (mod 4)` divides to an odd power.
pub fn sieve_two_squares_multiplicative(lo: u64, hi: u64) -> Result<Vec<u64>> {
    check_range(lo, hi)?;
    let len = (hi - lo) as usize;
    let mut bits = vec![u64::MAX; words_for(len)];
    // mask tail bits so popcounts stay meaningful
    if !len.is_multiple_of(64) {
        *bits.last_mut().unwrap() = (1u64 << (len % 64)) - 1;
    }
    let mut residual: Vec<u32> = (lo..hi).map(|n| n as u32).collect();
    for p in base_primes((hi - 1).isqrt()) {
        let p64 = p as u64;
        let odd_class = p % 4 == 3;
        let mut m = lo.div_ceil(p64) * p64;
        while m < hi {
            let idx = (m - lo) as usize;
            let mut e = 0u32;
            while residual[idx].is_multiple_of(p) {
                residual[idx] /= p;
                e += 1;
            }
            if odd_class && e % 2 == 1 {
                clear_bit(&mut bits, idx);
            }
            m += p64;
        }
    }
    // leftover cofactor is a single prime above the square-root bound
    for (idx, &r) in residual.iter().enumerate() {
        if r > 1 && r % 4 == 3 {
            clear_bit(&mut bits, idx);
        }
    }
    Ok(bits)
}

/// ω and Ω tables over `[lo, hi)`. `primes` must cover `isqrt(hi − 1)`.
pub fn sieve_additive(lo: u64, hi: u64, primes: &[u32]) -> Result<(Vec<u8>, Vec<u8>)> {
    check_range(lo, hi)?;
    let len = (hi - lo) as usize;
    let mut omega = vec![0u8; len];
    let mut big_omega = vec![0u8; len];
    let mut residual: Vec<u32> = (lo..hi).map(|n| n as u32).collect();
    let bound = (hi - 1).isqrt();
    for &p in primes {
        let p64 = p as u64;
        if p64 > bound {
            break;
        }
        let mut m = lo.div_ceil(p64) * p64;
        while m < hi {
            let idx = (m - lo) as usize;
            let mut e = 0u8;
            while residual[idx].is_multiple_of(p) {
                residual[idx] /= p;
                e += 1;
            }
            omega[idx] += 1;
            big_omega[idx] += e;
            m += p64;
        }
    }
    for (idx, &r) in residual.iter().enumerate() {
        if r > 1 {
            omega[idx] += 1;
            big_omega[idx] += 1;
        }
    }
    Ok((omega, big_omega))
}

/// Populate one block: lattice pass for the S-indicator, factorization pass
/// for ω/Ω.
pub fn build_block(lo: u64, hi: u64, primes: &[u32]) -> Result<SieveBlock> {
    let in_s = sieve_two_squares_lattice(lo, hi)?;
    let (omega, big_omega) = sieve_additive(lo, hi, primes)?;
    Ok(SieveBlock {
        lo,
        hi,
        in_s,
        omega,
        big_omega,
    })
}

fn segment_starts(limit: u64, segment_len: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut lo = 1u64;
    while lo <= limit {
        let hi = (lo + segment_len).min(limit + 1);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

fn normalize_segment_len(segment_len: u64) -> u64 {
    segment_len.max(64).div_ceil(64) * 64
}

/// Sieve `[1, limit]` in independent segments, sequentially.
pub fn sieve_range_seq(limit: u64, segment_len: u64) -> Result<Vec<SieveBlock>> {
    check_range(1, limit + 1)?;
    let segment_len = normalize_segment_len(segment_len);
    let primes = base_primes(limit.isqrt());
    segment_starts(limit, segment_len)
        .into_iter()
        .map(|(lo, hi)| build_block(lo, hi, &primes))
        .collect()
}

/// Sieve `[1, limit]` in independent segments on the rayon pool.
#[cfg(feature = "parallel")]
pub fn sieve_range_par(limit: u64, segment_len: u64) -> Result<Vec<SieveBlock>> {
    use rayon::prelude::*;
    check_range(1, limit + 1)?;
    let segment_len = normalize_segment_len(segment_len);
    let primes = base_primes(limit.isqrt());
    segment_starts(limit, segment_len)
        .into_par_iter()
        .map(|(lo, hi)| build_block(lo, hi, &primes))
        .collect()
}

/// Size the global worker pool (no-op without the `parallel` feature; errors
/// if the pool was already initialized).
#[cfg(feature = "parallel")]
pub fn set_worker_threads(n: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Resource(format!("worker pool: {e}")))
}

#[cfg(not(feature = "parallel"))]
pub fn set_worker_threads(_n: usize) -> Result<()> {
    Ok(())
}

/// Sieve `[1, limit]`; parallel when the `parallel` feature is enabled.
pub fn sieve_range(limit: u64, segment_len: u64) -> Result<Vec<SieveBlock>> {
    #[cfg(feature = "parallel")]
    {
        sieve_range_par(limit, segment_len)
    }
    #[cfg(not(feature = "parallel"))]
    {
        sieve_range_seq(limit, segment_len)
    }
}

/// Concatenate contiguous blocks into one (for caching and whole-range scans).
pub fn merge_blocks(blocks: Vec<SieveBlock>) -> Result<SieveBlock> {
    let Some(first) = blocks.first() else {
        return Err(Error::Domain("no blocks to merge".into()));
    };
    let lo = first.lo;
    let hi = blocks.last().unwrap().hi;
    let total_len = (hi - lo) as usize;
    let mut in_s = Vec::with_capacity(words_for(total_len));
    let mut omega = Vec::with_capacity(total_len);
    let mut big_omega = Vec::with_capacity(total_len);
    let mut expected_lo = lo;
    let mut bit_offset = 0usize;
    for block in blocks {
        if block.lo != expected_lo {
            return Err(Error::Resource(format!(
                "blocks not contiguous: expected lo = {expected_lo}, got {}",
                block.lo
            )));
        }
        expected_lo = block.hi;
        let len = block.len() as usize;
        if bit_offset.is_multiple_of(64) {
            in_s.truncate(bit_offset / 64);
            in_s.extend_from_slice(&block.in_s);
        } else {
            // unaligned tail: copy bit by bit
            in_s.resize(words_for(bit_offset + len), 0);
            for k in 0..len {
                if block.bit_at(k) {
                    set_bit(&mut in_s, bit_offset + k);
                }
            }
        }
        bit_offset += len;
        omega.extend_from_slice(&block.omega);
        big_omega.extend_from_slice(&block.big_omega);
    }
    in_s.resize(words_for(total_len), 0);
    Ok(SieveBlock {
        lo,
        hi,
        in_s,
        omega,
        big_omega,
    })
}

/// Exact totals of the chosen weight per residue class mod `q` over the block.
pub fn count_by_residue(block: &SieveBlock, q: u64, weight: Weight) -> Result<Vec<u64>> {
    if q == 0 {
        return Err(Error::InvalidModulus);
    }
    let mut totals = vec![0u64; q as usize];
    let mut r = (block.lo % q) as usize;
    let len = block.len() as usize;
    match weight {
        Weight::IndicatorS => {
            for k in 0..len {
                totals[r] += block.bit_at(k) as u64;
                r += 1;
                if r == q as usize {
                    r = 0;
                }
            }
        }
        Weight::Omega => {
            for &v in block.omega_slice() {
                totals[r] += v as u64;
                r += 1;
                if r == q as usize {
                    r = 0;
                }
            }
        }
        Weight::BigOmega => {
            for &v in block.big_omega_slice() {
                totals[r] += v as u64;
                r += 1;
                if r == q as usize {
                    r = 0;
                }
            }
        }
    }
    Ok(totals)
}
