//! Hurwitz zeta and Dirichlet L-values at real arguments `s > 0`.
//!
//! Everything reduces to sums `Σ_{k≥0} (a + qk)^{−s} = q^{−s}·ζ(s, a/q)`,
//! evaluated by Euler–Maclaurin with hard-coded Bernoulli numbers and an
//! explicit remainder bound (first omitted term, checked to be decreasing at
//! the cut). Writing the summand as `(a + qk)^{−s}` instead of scaling
//! `ζ(s, a/q)` afterwards keeps every intermediate in `[0, 1]`, so the same
//! code path works for `s = 1/2` and for the huge exponents `s = 2^k` needed
//! by the Landau–Ramanujan product.
//!
//! `s = 1` is a pole of each individual term; for non-principal characters
//! the poles cancel and `l_value` switches to the deflated limit
//! `lim_{s→1} [Σ (a+qk)^{−s} − (1/q)/(s−1)]`, a digamma-type series.

use crate::arith::{factorize, is_prime};
use crate::characters::Character;
use crate::error::Error;
use crate::Result;
use num_complex::Complex64;
use serde::Serialize;

/// Default evaluation tolerance; reference comparisons round to 3 decimals on
/// top of this.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Smallest accepted tolerance.
pub const MIN_TOL: f64 = 1e-14;

/// Bernoulli numbers B₂..B₃₂ as exact (numerator, denominator) pairs.
const BERNOULLI: [(i64, i64); 16] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
    (-23749461029, 870),
    (8615841276005, 14322),
    (-7709321041217, 510),
];

/// B_{2j} as f64, 1-indexed by `j`.
fn bernoulli(j: usize) -> f64 {
    let (n, d) = BERNOULLI[j - 1];
    n as f64 / d as f64
}

/// (2j)! as f64 (exact for the range used).
fn fact2j(j: usize) -> f64 {
    (2..=2 * j as u64).map(|i| i as f64).product::<f64>().max(1.0)
}

/// What an [`LValueResult`] evaluates.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub enum ValueId {
    /// `ζ(s, a)`.
    Hurwitz { a: f64 },
    /// `L(s, χ)` for a character of the given modulus.
    LFunction { modulus: u64 },
}

/// A numeric L-function or Hurwitz-zeta value with a rigorous-style error bound.
#[derive(Clone, Debug, Serialize)]
pub struct LValueResult {
    pub value_re: f64,
    /// Exactly zero for real characters (real-only accumulation, not rounding).
    pub value_im: f64,
    pub error_bound: f64,
    pub s: f64,
    pub id: ValueId,
}

impl LValueResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }

    /// Real part; the value itself for real characters.
    pub fn real(&self) -> f64 {
        self.value_re
    }
}

/// Log-magnitude of Euler–Maclaurin term `j` for the summand `(a+qk)^{−s}`
/// truncated at `x = a + qN`.
fn log_term(s: f64, q: f64, x: f64, j: usize) -> f64 {
    let mut lg = (bernoulli(j).abs() / fact2j(j)).ln();
    for i in 0..(2 * j - 1) {
        lg += (s + i as f64).ln();
    }
    lg + (2 * j - 1) as f64 * q.ln() - (s + 2.0 * j as f64 - 1.0) * x.ln()
}

/// `Σ_{k≥0} (a + qk)^{−s}` (analytic continuation for 0 < s < 1), with the
/// truncation bound achieved. `s > 0`, `s ≠ 1`, `a > 0`, `q ≥ 1`.
fn em_sum(s: f64, a: f64, q: f64, tol: f64) -> Result<(f64, f64)> {
    debug_assert!(s > 0.0 && s != 1.0 && a > 0.0 && q >= 1.0);
    let mut best = f64::INFINITY;
    for n in [8usize, 16, 32, 64, 128, 256, 1024, 4096, 16384, 65536] {
        let x = a + q * n as f64;
        // smallest J ≤ 15 whose first omitted term is below tol/2 and still decreasing
        let mut chosen = None;
        for j in 1..=15usize {
            let cur = log_term(s, q, x, j);
            let next = log_term(s, q, x, j + 1);
            if next <= (0.5 * tol).ln() && (next < cur || next == f64::NEG_INFINITY) {
                chosen = Some((j, next.exp()));
                break;
            }
            best = best.min(next.exp());
        }
        let Some((big_j, bound)) = chosen else {
            continue;
        };
        let mut sum = 0.0;
        for k in (0..n).rev() {
            sum += (a + q * k as f64).powf(-s);
        }
        sum += x.powf(1.0 - s) / (q * (s - 1.0)) + 0.5 * x.powf(-s);
        let mut poch = s; // (s)_{2j−1}
        let mut qpow = q; // q^{2j−1}
        let mut xpow = x.powf(-s - 1.0); // x^{−s−2j+1}
        for j in 1..=big_j {
            sum += bernoulli(j) / fact2j(j) * poch * qpow * xpow;
            poch *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
            qpow *= q * q;
            xpow /= x * x;
        }
        // analytic remainder plus a float-roundoff allowance; the roundoff
        // part scales with |sum|, so huge values (near-pole s) can make the
        // requested absolute tolerance unattainable in doubles
        let bound = bound + 1e-15 * (n as f64).ln().max(1.0) * sum.abs().max(1.0);
        if bound > tol {
            return Err(Error::Precision {
                requested: tol,
                achieved: bound,
            });
        }
        return Ok((sum, bound));
    }
    Err(Error::Precision {
        requested: tol,
        achieved: best,
    })
}

/// Deflated limit at `s = 1`: `lim_{s→1} [Σ_{k≥0}(a+qk)^{−s} − (1/q)/(s−1)]`.
fn em_sum_deflated(a: f64, q: f64, tol: f64) -> Result<(f64, f64)> {
    debug_assert!(a > 0.0 && q >= 1.0);
    let mut best = f64::INFINITY;
    for n in [16usize, 64, 256, 1024, 4096, 65536] {
        let x = a + q * n as f64;
        // term_j = B_{2j}/(2j) · q^{2j−1} · x^{−2j}
        let lt = |j: usize| -> f64 {
            (bernoulli(j).abs() / (2.0 * j as f64)).ln() + (2 * j - 1) as f64 * q.ln()
                - 2.0 * j as f64 * x.ln()
        };
        let mut chosen = None;
        for j in 1..=15usize {
            let next = lt(j + 1);
            if next <= (0.5 * tol).ln() && next < lt(j) {
                chosen = Some((j, next.exp()));
                break;
            }
            best = best.min(next.exp());
        }
        let Some((big_j, bound)) = chosen else {
            continue;
        };
        let mut sum = 0.0;
        for k in (0..n).rev() {
            sum += 1.0 / (a + q * k as f64);
        }
        sum += -x.ln() / q + 0.5 / x;
        let mut qpow = q;
        let mut xpow = 1.0 / (x * x);
        for j in 1..=big_j {
            sum += bernoulli(j) / (2.0 * j as f64) * qpow * xpow;
            qpow *= q * q;
            xpow /= x * x;
        }
        let bound = bound + 1e-15 * sum.abs().max(1.0);
        if bound > tol {
            return Err(Error::Precision {
                requested: tol,
                achieved: bound,
            });
        }
        return Ok((sum, bound));
    }
    Err(Error::Precision {
        requested: tol,
        achieved: best,
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_nan() || tol < MIN_TOL {
        return Err(Error::Domain(format!(
            "tolerance {tol:e} below supported minimum {MIN_TOL:e}"
        )));
    }
    Ok(())
}

/// Hurwitz zeta `ζ(s, a) = Σ_{n≥0} (n+a)^{−s}` and its continuation for
/// `0 < s < 1`. Requires `s > 0`, `s ≠ 1`, `0 < a ≤ 1`, `tol ≥ 1e−14`.
pub fn hurwitz_zeta(s: f64, a: f64, tol: f64) -> Result<LValueResult> {
    check_tol(tol)?;
    if s == 1.0 {
        return Err(Error::Pole(1.0));
    }
    if s.is_nan() || s <= 0.0 {
        return Err(Error::Domain(format!("s = {s} must be positive")));
    }
    if a.is_nan() || a <= 0.0 || a > 1.0 {
        return Err(Error::Domain(format!("a = {a} must lie in (0, 1]")));
    }
    let (value, bound) = em_sum(s, a, 1.0, tol)?;
    Ok(LValueResult {
        value_re: value,
        value_im: 0.0,
        error_bound: bound,
        s,
        id: ValueId::Hurwitz { a },
    })
}

/// Riemann zeta at real `s > 0`, `s ≠ 1`.
pub fn riemann_zeta(s: f64, tol: f64) -> Result<LValueResult> {
    hurwitz_zeta(s, 1.0, tol)
}

/// `L(s, χ)` at the character's own modulus: `q^{−s} Σ_a χ(a) ζ(s, a/q)`.
/// For imprimitive `χ` this is the L-function with the missing Euler factors,
/// as the bias-constant formulas require. Principal characters are computed
/// as `ζ(s)·∏_{p|q}(1 − p^{−s})`; `s = 1` is then a pole. Non-principal
/// characters support `s = 1` through the deflated series.
pub fn l_value(chi: &Character, s: f64, tol: f64) -> Result<LValueResult> {
    check_tol(tol)?;
    if s.is_nan() || s <= 0.0 {
        return Err(Error::Domain(format!("s = {s} must be positive")));
    }
    let q = chi.modulus();
    let id = ValueId::LFunction { modulus: q };

    if chi.is_principal() {
        if s == 1.0 {
            return Err(Error::Pole(1.0));
        }
        let (z, zb) = em_sum(s, 1.0, 1.0, tol)?;
        let mut prod = 1.0;
        for &(p, _) in &factorize(q) {
            prod *= 1.0 - (p as f64).powf(-s);
        }
        let bound = zb * prod.abs() + 1e-16 * (z * prod).abs();
        if bound > tol {
            return Err(Error::Precision {
                requested: tol,
                achieved: bound,
            });
        }
        return Ok(LValueResult {
            value_re: z * prod,
            value_im: 0.0,
            error_bound: bound,
            s,
            id,
        });
    }

    let per_term_tol = (tol / chi.group_order() as f64).max(MIN_TOL);
    let qf = q as f64;
    let mut bound = 0.0;
    let mut sum = Complex64::new(0.0, 0.0);
    let real = chi.is_real();
    for r in 1..=q {
        // exact ±1 accumulation keeps real characters exactly real
        let v = if real {
            Complex64::new(chi.real_value(r as i64) as f64, 0.0)
        } else {
            chi.eval(r as i64)
        };
        if v.norm_sqr() == 0.0 {
            continue;
        }
        let (t, b) = if s == 1.0 {
            em_sum_deflated(r as f64, qf, per_term_tol)?
        } else {
            em_sum(s, r as f64, qf, per_term_tol)?
        };
        sum += v * t;
        bound += b;
    }
    if bound > tol {
        return Err(Error::Precision {
            requested: tol,
            achieved: bound,
        });
    }
    Ok(LValueResult {
        value_re: sum.re,
        value_im: if real { 0.0 } else { sum.im },
        error_bound: bound,
        s,
        id,
    })
}

/// `sqrt(L(1/2,χ)·L(1/2,χχ₋₄))`, non-negative branch; the twist is evaluated
/// at modulus `lcm(q, 4)`. Rejects principal input. If the product is
/// negative beyond the error bounds, returns a diagnostic error (this would
/// contradict the expected non-negativity of these L-values).
pub fn l_half_product(chi: &Character) -> Result<f64> {
    if !chi.is_real() {
        return Err(Error::Domain("character must be real".into()));
    }
    if chi.is_principal() {
        return Err(Error::Domain(
            "principal characters are excluded from the half-product".into(),
        ));
    }
    let twist = chi.twist_minus4();
    let a = l_value(chi, 0.5, DEFAULT_TOL)?;
    let b = l_value(&twist, 0.5, DEFAULT_TOL)?;
    let prod = a.real() * b.real();
    let bound =
        a.error_bound * b.real().abs() + b.error_bound * a.real().abs() + a.error_bound * b.error_bound;
    if prod < -bound {
        return Err(Error::NegativeLProduct(prod));
    }
    Ok(prod.max(0.0).sqrt())
}

/// Local Euler factor `(1 − χ(p)·p^{−s})^{−1}`.
pub fn euler_factor(chi: &Character, p: u64, s: f64) -> Result<Complex64> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if s.is_nan() || s <= 0.0 {
        return Err(Error::Domain(format!("s = {s} must be positive")));
    }
    let c = chi.eval(p as i64);
    Ok(Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - c * (p as f64).powf(-s)))
}

/// Local factor of the sum-of-two-squares generating function `F(s, χ)`:
/// `(1 − χ(p)p^{−s})^{−1}` for `p ≢ 3 (mod 4)` and
/// `(1 − χ²(p)p^{−2s})^{−1}` for `p ≡ 3 (mod 4)`.
pub fn two_squares_local_factor(chi: &Character, p: u64, s: f64) -> Result<Complex64> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if p % 4 == 3 {
        let c = chi.eval(p as i64);
        Ok(Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - c * c * (p as f64).powf(-2.0 * s)))
    } else {
        euler_factor(chi, p, s)
    }
}
