//! Run configuration: defaults ← environment ← key=value config file ← flags.

use s2sq::arith::gcd;
use s2sq::race::Weight;
use serde::Serialize;
use std::path::{Path, PathBuf};

use crate::CliError;

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "S2SQ_CACHE_DIR";

/// Fully resolved run configuration (echoed into the manifest).
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub limit: u64,
    pub modulus: Option<u64>,
    pub pairs: Vec<(u64, u64)>,
    pub weight: Weight,
    pub segment_len: u64,
    pub workers: Option<usize>,
    pub cache_dir: PathBuf,
    pub out_dir: PathBuf,
    pub tol: f64,
    pub stride: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            limit: 10_000_000,
            modulus: None,
            pairs: Vec::new(),
            weight: Weight::IndicatorS,
            segment_len: s2sq::sieve::DEFAULT_SEGMENT_LEN,
            workers: None,
            cache_dir: PathBuf::from(".s2sq-cache"),
            out_dir: PathBuf::from("s2sq-out"),
            tol: s2sq::lfunc::DEFAULT_TOL,
            stride: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.limit == 0 {
            return Err(CliError::Usage("limit must be positive".into()));
        }
        if self.segment_len == 0 {
            return Err(CliError::Usage("segment length must be positive".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(CliError::Usage("tolerance must be positive".into()));
        }
        if let Some(q) = self.modulus {
            if q == 0 {
                return Err(CliError::Usage("modulus must be positive".into()));
            }
            for &(a, b) in &self.pairs {
                if gcd(a % q, q) != 1 || gcd(b % q, q) != 1 {
                    return Err(CliError::Usage(format!(
                        "pair ({a}, {b}) is not coprime to modulus {q}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Values loaded from a key=value file; `None` means "not set".
#[derive(Clone, Debug, Default)]
pub struct FileConfig {
    pub limit: Option<u64>,
    pub modulus: Option<u64>,
    pub pairs: Option<Vec<(u64, u64)>>,
    pub weight: Option<Weight>,
    pub segment_len: Option<u64>,
    pub workers: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub tol: Option<f64>,
    pub stride: Option<u64>,
}

/// Parse `a,b` into a residue pair.
pub fn parse_pair(s: &str) -> Result<(u64, u64), CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!(
            "pair {s:?} must be two comma-separated residues"
        )));
    }
    let a = parts[0]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad residue {:?}", parts[0])))?;
    let b = parts[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad residue {:?}", parts[1])))?;
    Ok((a, b))
}

/// Flat key=value lines with `#` comments.
pub fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut cfg = FileConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "{}:{}: expected key=value, got {raw:?}",
                path.display(),
                lineno + 1
            )));
        };
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let bad = |what: &str| {
            CliError::Usage(format!(
                "{}:{}: bad {what} value {value:?}",
                path.display(),
                lineno + 1
            ))
        };
        match key.as_str() {
            "limit" => cfg.limit = Some(value.parse().map_err(|_| bad("limit"))?),
            "modulus" => cfg.modulus = Some(value.parse().map_err(|_| bad("modulus"))?),
            "pairs" => {
                let mut pairs = Vec::new();
                for item in value.split(';').filter(|s| !s.trim().is_empty()) {
                    pairs.push(parse_pair(item)?);
                }
                cfg.pairs = Some(pairs);
            }
            "weight" => cfg.weight = Some(value.parse().map_err(CliError::Usage)?),
            "segment_len" => cfg.segment_len = Some(value.parse().map_err(|_| bad("segment_len"))?),
            "workers" => cfg.workers = Some(value.parse().map_err(|_| bad("workers"))?),
            "cache_dir" => cfg.cache_dir = Some(PathBuf::from(value)),
            "out_dir" => cfg.out_dir = Some(PathBuf::from(value)),
            "tol" => cfg.tol = Some(value.parse().map_err(|_| bad("tol"))?),
            "stride" => cfg.stride = Some(value.parse().map_err(|_| bad("stride"))?),
            other => {
                return Err(CliError::Usage(format!(
                    "{}:{}: unknown config key {other:?}",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(cfg)
}
