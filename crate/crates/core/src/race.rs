//! Residue-class races over sieved blocks.
//!
//! A race is a single ordered scan of `[1, N]` maintaining running per-residue
//! totals of the chosen weight. At every `n` the pair relation
//! (lead/tie/trail) is tallied; at checkpoints the signed difference is
//! recorded for plotting and main-term comparison.
//!
//! Lead direction per weight (strict inequalities):
//! * `indicator_s` — lead means `count_a > count_b`;
//! * `omega`       — lead means `count_a < count_b`;
//! * `big_omega`   — lead means `count_a > count_b`.
//!
//! Sieve blocks may be produced by parallel workers, but the accumulation is
//! inherently sequential (running counts are prefix sums); multiple pairs
//! share one scan.

use crate::arith::{gcd, phi};
use crate::characters::is_quadratic_residue;
use crate::constants::{c_q, c_qab, d_qab, BiasConstant};
use crate::error::Error;
use crate::sieve::{count_by_residue, SieveBlock};
use crate::Result;
use serde::Serialize;

pub use crate::sieve::Weight;

/// Default checkpoint stride divisor for plot-density grids.
pub const PLOT_CHECKPOINTS: u64 = 10_000;
/// Default checkpoint stride divisor for residual statistics.
pub const RESIDUAL_CHECKPOINTS: u64 = 100;

/// Checkpointed running counts for one pair `(a, b)`.
#[derive(Clone, Debug, Serialize)]
pub struct RaceSeries {
    pub q: u64,
    pub a: u64,
    pub b: u64,
    pub weight: Weight,
    pub limit: u64,
    pub checkpoints: Vec<u64>,
    /// `count_a − count_b` at each checkpoint.
    pub diffs: Vec<i64>,
    pub counts_a: Vec<u64>,
    pub counts_b: Vec<u64>,
    /// Number of `n ≤ limit` where `a` strictly leads (direction per weight).
    pub lead_count: u64,
    pub tie_count: u64,
    pub trail_count: u64,
}

impl RaceSeries {
    pub fn lead_density(&self) -> f64 {
        self.lead_count as f64 / self.limit as f64
    }

    pub fn tie_density(&self) -> f64 {
        self.tie_count as f64 / self.limit as f64
    }

    pub fn trail_density(&self) -> f64 {
        self.trail_count as f64 / self.limit as f64
    }

    pub fn final_diff(&self) -> i64 {
        *self.diffs.last().expect("series has a final checkpoint")
    }
}

fn validate_blocks(blocks: &[SieveBlock]) -> Result<u64> {
    let Some(first) = blocks.first() else {
        return Err(Error::Resource("no sieve data supplied".into()));
    };
    if first.lo() != 1 {
        return Err(Error::Resource(format!(
            "sieve data must start at 1, got {}",
            first.lo()
        )));
    }
    let mut expected = first.lo();
    for b in blocks {
        if b.lo() != expected {
            return Err(Error::Resource(format!(
                "sieve data has a gap at {expected}"
            )));
        }
        expected = b.hi();
    }
    Ok(expected - 1)
}

fn validate_pair(q: u64, a: u64, b: u64, weight: Weight) -> Result<()> {
    if gcd(a % q, q) != 1 || gcd(b % q, q) != 1 {
        return Err(Error::Domain(format!(
            "residues ({a}, {b}) must be coprime to {q}"
        )));
    }
    if weight == Weight::IndicatorS {
        let g4 = gcd(4, q);
        if a % g4 != 1 % g4 || b % g4 != 1 % g4 {
            return Err(Error::Domain(format!(
                "residues ({a}, {b}) must be ≡ 1 (mod {g4}) for the sum-of-two-squares race"
            )));
        }
    }
    Ok(())
}

/// Run one scan accumulating every pair in `pairs`.
pub fn run_races(
    blocks: &[SieveBlock],
    q: u64,
    pairs: &[(u64, u64)],
    weight: Weight,
    checkpoint_stride: u64,
) -> Result<Vec<RaceSeries>> {
    if q == 0 {
        return Err(Error::InvalidModulus);
    }
    let limit = validate_blocks(blocks)?;
    if limit < q {
        return Err(Error::Domain(format!("limit {limit} below modulus {q}")));
    }
    for &(a, b) in pairs {
        validate_pair(q, a, b, weight)?;
    }
    let stride = checkpoint_stride.max(1);
    let qs = q as usize;
    let reduced: Vec<(usize, usize)> = pairs
        .iter()
        .map(|&(a, b)| ((a % q) as usize, (b % q) as usize))
        .collect();
    let gt_is_lead = weight != Weight::Omega;

    let mut counts = vec![0u64; qs];
    let mut lead = vec![0u64; pairs.len()];
    let mut tie = vec![0u64; pairs.len()];
    let mut trail = vec![0u64; pairs.len()];
    let mut checkpoints = Vec::new();
    let mut diffs = vec![Vec::new(); pairs.len()];
    let mut counts_a = vec![Vec::new(); pairs.len()];
    let mut counts_b = vec![Vec::new(); pairs.len()];

    let mut r = 1 % qs; // residue of n = 1
    let mut next_cp = stride;
    for block in blocks {
        let lo = block.lo();
        let omega = block.omega_slice();
        let big_omega = block.big_omega_slice();
        for k in 0..block.len() as usize {
            let n = lo + k as u64;
            let w = match weight {
                Weight::IndicatorS => block.bit_at(k) as u64,
                Weight::Omega => omega[k] as u64,
                Weight::BigOmega => big_omega[k] as u64,
            };
            counts[r] += w;
            for (i, &(ra, rb)) in reduced.iter().enumerate() {
                let (ca, cb) = (counts[ra], counts[rb]);
                if ca == cb {
                    tie[i] += 1;
                } else if (ca > cb) == gt_is_lead {
                    lead[i] += 1;
                } else {
                    trail[i] += 1;
                }
            }
            if n == next_cp || n == limit {
                checkpoints.push(n);
                for (i, &(ra, rb)) in reduced.iter().enumerate() {
                    diffs[i].push(counts[ra] as i64 - counts[rb] as i64);
                    counts_a[i].push(counts[ra]);
                    counts_b[i].push(counts[rb]);
                }
                if n == next_cp {
                    next_cp += stride;
                }
            }
            r += 1;
            if r == qs {
                r = 0;
            }
        }
    }

    Ok(pairs
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| RaceSeries {
            q,
            a,
            b,
            weight,
            limit,
            checkpoints: checkpoints.clone(),
            diffs: std::mem::take(&mut diffs[i]),
            counts_a: std::mem::take(&mut counts_a[i]),
            counts_b: std::mem::take(&mut counts_b[i]),
            lead_count: lead[i],
            tie_count: tie[i],
            trail_count: trail[i],
        })
        .collect())
}

/// Race a single pair.
pub fn run_race(
    blocks: &[SieveBlock],
    q: u64,
    a: u64,
    b: u64,
    weight: Weight,
    checkpoint_stride: u64,
) -> Result<RaceSeries> {
    Ok(run_races(blocks, q, &[(a, b)], weight, checkpoint_stride)?
        .pop()
        .expect("one pair in, one series out"))
}

/// Per-residue totals up to `x` inclusive, recomputed directly from block
/// data (independent of the race scan; used for consistency checks).
pub fn count_by_residue_up_to(
    blocks: &[SieveBlock],
    q: u64,
    weight: Weight,
    x: u64,
) -> Result<Vec<u64>> {
    if q == 0 {
        return Err(Error::InvalidModulus);
    }
    let mut totals = vec![0u64; q as usize];
    for block in blocks {
        if block.lo() > x {
            break;
        }
        if block.hi() - 1 <= x {
            for (r, t) in count_by_residue(block, q, weight)?.iter().enumerate() {
                totals[r] += t;
            }
        } else {
            for n in block.lo()..=x {
                totals[(n % q) as usize] += block.weight(n, weight);
            }
        }
    }
    Ok(totals)
}

/// The checkpointed series for the mod-3 race `(a, b) = (1, 2)` at plot
/// density (stride `N/10⁴`).
pub fn figure3_series(blocks: &[SieveBlock]) -> Result<RaceSeries> {
    let limit = validate_blocks(blocks)?;
    let stride = (limit / PLOT_CHECKPOINTS).max(1);
    run_race(blocks, 3, 1, 2, Weight::IndicatorS, stride)
}

/// Residue display order of the mod-15 experiment tables.
pub const TABLE15_RESIDUES: [u64; 8] = [1, 4, 2, 7, 8, 11, 13, 14];

/// The pairs published for the mod-15 experiment: `a` precedes `b` in display
/// order, and `a/b` is a nonquadratic residue (pairs with `a/b` a QR carry a
/// zero constant and are omitted).
pub fn table2_pairs() -> Vec<(u64, u64)> {
    let mut pairs = Vec::new();
    for (i, &a) in TABLE15_RESIDUES.iter().enumerate() {
        for &b in &TABLE15_RESIDUES[i + 1..] {
            // a/b mod 15: b⁻¹ via exhaustive search (q is tiny)
            let b_inv = (1..15u64).find(|x| x * b % 15 == 1).unwrap();
            let ratio = a * b_inv % 15;
            if !is_quadratic_residue(ratio, 15).unwrap() {
                pairs.push((a, b));
            }
        }
    }
    pairs
}

/// One cell of the mod-15 lead-density table.
#[derive(Clone, Debug, Serialize)]
pub struct Table2Entry {
    pub a: u64,
    pub b: u64,
    /// The bias constant `C_{15,a,b}` (literal normalization).
    pub constant: f64,
    pub lead_count: u64,
    pub tie_count: u64,
    pub lead_density: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table2Report {
    pub limit: u64,
    pub entries: Vec<Table2Entry>,
}

/// Lead densities for all published mod-15 pairs in one scan.
pub fn table2(blocks: &[SieveBlock]) -> Result<Table2Report> {
    let limit = validate_blocks(blocks)?;
    if limit < 100_000 {
        return Err(Error::Domain(format!(
            "limit {limit} too small for meaningful densities (need ≥ 10^5)"
        )));
    }
    let pairs = table2_pairs();
    let series = run_races(blocks, 15, &pairs, Weight::IndicatorS, limit)?;
    let entries = series
        .iter()
        .map(|s| {
            Ok(Table2Entry {
                a: s.a,
                b: s.b,
                constant: c_qab(15, s.a, s.b)?.value,
                lead_count: s.lead_count,
                tie_count: s.tie_count,
                lead_density: s.lead_density(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table2Report { limit, entries })
}

/// Round half-up to two decimals, as the table presentation does.
pub fn percent_2dp(density: f64) -> f64 {
    (density * 10_000.0).round() / 100.0
}

/// Normalized residual statistics over one dyadic window.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualWindow {
    pub x_lo: u64,
    pub x_hi: u64,
    pub checkpoints: usize,
    /// Mean of `|e(x)|` where `e(x) = E(x)·normalizer(x)` rescales the main
    /// term to a constant.
    pub mean_abs_e: f64,
    pub mean_sq_e: f64,
    /// Mean of `E(x)²` over the window, the `(1/X)∫|E|²` trend statistic.
    pub mean_sq_big_e: f64,
}

/// A race series compared against its predicted main term.
#[derive(Clone, Debug, Serialize)]
pub struct BiasReport {
    pub q: u64,
    pub a: u64,
    pub b: u64,
    pub weight: Weight,
    pub limit: u64,
    pub lead_count: u64,
    pub tie_count: u64,
    pub trail_count: u64,
    pub lead_density: f64,
    /// `C_{q,a,b}` or `D_{q,a,b}` with per-character terms.
    pub constant: BiasConstant,
    /// `C_q` for sum-of-two-squares races; absent for ω/Ω.
    pub c_q: Option<f64>,
    /// Normalized main-term coefficient `A`: the predicted difference is
    /// `A·√x/(log x)^{3/4}` (S), `−A·√x/log x` (ω) or `A·√x/log x` (Ω).
    pub predicted_coefficient: f64,
    pub windows: Vec<ResidualWindow>,
}

/// Predicted main term at `x` for the series' weight; zero below `x = 2`
/// where the `log x` normalization degenerates.
pub fn predicted_main_term(weight: Weight, coefficient: f64, x: f64) -> f64 {
    if x < 2.0 {
        return 0.0;
    }
    let sqrt_x = x.sqrt();
    let log_x = x.ln();
    match weight {
        Weight::IndicatorS => coefficient * sqrt_x / log_x.powf(0.75),
        Weight::Omega => -coefficient * sqrt_x / log_x,
        Weight::BigOmega => coefficient * sqrt_x / log_x,
    }
}

fn normalizer(weight: Weight, x: f64) -> f64 {
    match weight {
        Weight::IndicatorS => x.ln().powf(0.75) / x.sqrt(),
        Weight::Omega | Weight::BigOmega => x.ln() / x.sqrt(),
    }
}

/// Compare a series against its predicted main term: computes the bias
/// constant, the normalized coefficient `A = φ(q)⁻¹·C_q·C_{q,a,b}` (or the
/// `D_{q,a,b}` analogue for ω/Ω), and windowed statistics of the normalized
/// residual `e(x) = E(x)·(log x)^{3/4}/√x` (resp. `E(x)·log x/√x`) over the
/// dyadic windows `[N/2^{j+1}, N/2^j]`, `j = 0..5`.
pub fn main_term_fit(series: &RaceSeries) -> Result<BiasReport> {
    let (constant, cq) = match series.weight {
        Weight::IndicatorS => {
            let c = c_qab(series.q, series.a, series.b)?;
            let cq = c_q(series.q)?;
            (c, Some(cq))
        }
        Weight::Omega | Weight::BigOmega => (d_qab(series.q, series.a, series.b)?, None),
    };
    let coefficient = constant.value * cq.unwrap_or(1.0) / phi(series.q) as f64;

    let n = series.limit;
    let mut windows = Vec::new();
    for j in 0..6u32 {
        let x_hi = n >> j;
        let x_lo = n >> (j + 1);
        let mut count = 0usize;
        let (mut abs_e, mut sq_e, mut sq_big_e) = (0.0, 0.0, 0.0);
        for (i, &x) in series.checkpoints.iter().enumerate() {
            if x <= x_lo.max(1) || x > x_hi {
                continue;
            }
            let xf = x as f64;
            let e_big = series.diffs[i] as f64
                - predicted_main_term(series.weight, coefficient, xf);
            let e = e_big * normalizer(series.weight, xf);
            count += 1;
            abs_e += e.abs();
            sq_e += e * e;
            sq_big_e += e_big * e_big;
        }
        if count > 0 {
            windows.push(ResidualWindow {
                x_lo,
                x_hi,
                checkpoints: count,
                mean_abs_e: abs_e / count as f64,
                mean_sq_e: sq_e / count as f64,
                mean_sq_big_e: sq_big_e / count as f64,
            });
        }
    }

    Ok(BiasReport {
        q: series.q,
        a: series.a,
        b: series.b,
        weight: series.weight,
        limit: series.limit,
        lead_count: series.lead_count,
        tie_count: series.tie_count,
        trail_count: series.trail_count,
        lead_density: series.lead_density(),
        constant,
        c_q: cq,
        predicted_coefficient: coefficient,
        windows,
    })
}
