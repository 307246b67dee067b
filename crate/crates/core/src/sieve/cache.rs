//! Versioned, checksummed on-disk format for sieve blocks.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic "S2SQ" | version u8 | kinds u8 | lo u64 | hi u64
//! in_s bits, LSB-first, ceil(len/8) bytes
//! omega bytes (len)
//! big_omega bytes (len)
//! fnv1a-64 checksum of everything above, u64
//! ```

use super::SieveBlock;
use crate::error::{CacheError, Error};
use crate::Result;
use std::fs;
use std::io::Write;
use std::path::Path;

pub const MAGIC: [u8; 4] = *b"S2SQ";
pub const VERSION: u8 = 1;

const KIND_IN_S: u8 = 1;
const KIND_OMEGA: u8 = 2;
const KIND_BIG_OMEGA: u8 = 4;
const HEADER_LEN: usize = 4 + 1 + 1 + 8 + 8;

fn fnv1a64(state: u64, bytes: &[u8]) -> u64 {
    let mut h = state;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;

fn packed_bits(block: &SieveBlock) -> Vec<u8> {
    let n_bytes = (block.len() as usize).div_ceil(8);
    block
        .in_s
        .iter()
        .flat_map(|w| w.to_le_bytes())
        .take(n_bytes)
        .collect()
}

/// Write a block to disk, bit-exact and checksummed.
pub fn store(block: &SieveBlock, path: &Path) -> Result<()> {
    let mut header = Vec::with_capacity(HEADER_LEN);
    header.extend_from_slice(&MAGIC);
    header.push(VERSION);
    header.push(KIND_IN_S | KIND_OMEGA | KIND_BIG_OMEGA);
    header.extend_from_slice(&block.lo.to_le_bytes());
    header.extend_from_slice(&block.hi.to_le_bytes());

    let bits = packed_bits(block);
    let mut checksum = FNV_OFFSET;
    for part in [&header[..], &bits, &block.omega, &block.big_omega] {
        checksum = fnv1a64(checksum, part);
    }

    let mut file = std::io::BufWriter::new(fs::File::create(path)?);
    file.write_all(&header)?;
    file.write_all(&bits)?;
    file.write_all(&block.omega)?;
    file.write_all(&block.big_omega)?;
    file.write_all(&checksum.to_le_bytes())?;
    file.flush()?;
    Ok(())
}

/// Load a block, verifying magic, version, length and checksum.
pub fn load(path: &Path) -> Result<SieveBlock> {
    let data = fs::read(path)?;
    if data.len() < HEADER_LEN + 8 {
        return Err(Error::Cache(CacheError::Truncated {
            expected: HEADER_LEN + 8,
            found: data.len(),
        }));
    }
    if data[..4] != MAGIC {
        return Err(Error::Cache(CacheError::BadMagic));
    }
    if data[4] != VERSION {
        return Err(Error::Cache(CacheError::Version {
            found: data[4],
            expected: VERSION,
        }));
    }
    let kinds = data[5];
    if kinds != (KIND_IN_S | KIND_OMEGA | KIND_BIG_OMEGA) {
        return Err(Error::Cache(CacheError::BadMagic));
    }
    let lo = u64::from_le_bytes(data[6..14].try_into().unwrap());
    let hi = u64::from_le_bytes(data[14..22].try_into().unwrap());
    if lo < 1 || hi <= lo {
        return Err(Error::Cache(CacheError::BadMagic));
    }
    let len = (hi - lo) as usize;
    let n_bytes = len.div_ceil(8);
    let expected = HEADER_LEN + n_bytes + 2 * len + 8;
    if data.len() != expected {
        return Err(Error::Cache(CacheError::Truncated {
            expected,
            found: data.len(),
        }));
    }

    let body_end = expected - 8;
    let stored = u64::from_le_bytes(data[body_end..].try_into().unwrap());
    if fnv1a64(FNV_OFFSET, &data[..body_end]) != stored {
        return Err(Error::Cache(CacheError::Checksum));
    }

    let bits_bytes = &data[HEADER_LEN..HEADER_LEN + n_bytes];
    let mut in_s = vec![0u64; len.div_ceil(64)];
    for (i, chunk) in bits_bytes.chunks(8).enumerate() {
        let mut word = [0u8; 8];
        word[..chunk.len()].copy_from_slice(chunk);
        in_s[i] = u64::from_le_bytes(word);
    }
    let omega = data[HEADER_LEN + n_bytes..HEADER_LEN + n_bytes + len].to_vec();
    let big_omega = data[HEADER_LEN + n_bytes + len..body_end].to_vec();
    Ok(SieveBlock {
        lo,
        hi,
        in_s,
        omega,
        big_omega,
    })
}
