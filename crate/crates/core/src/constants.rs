//! The explicit constants of the bias experiments.
//!
//! * `K` — the Landau–Ramanujan constant, via the doubly-exponentially
//!   convergent product over `ζ(2^k)` and `L(2^k, χ₋₄)`;
//! * `Γ(1/4)` — through the arithmetic-geometric mean (full double
//!   precision);
//! * `C_q`, `G(1/2,χ)` — assembled from `K` (the slow product over
//!   `p ≡ 3 mod 4` is never truncated directly in production paths; the
//!   exact relation `∏(1−p⁻²)^{−1/4} = (√2·K)^{1/2}` routes it through `K`);
//! * `C_{q,a,b}` and `D_{q,a,b}` — the race constants, summed over real
//!   characters;
//! * a per-prime verification of the generating-function identity, and the
//!   two-route consistency check of the main-term coefficient.

use crate::arith::{factorize, gcd};
use crate::characters::{build_group, Character};
use crate::error::Error;
use crate::lfunc::{l_half_product, l_value, riemann_zeta, DEFAULT_TOL};
use crate::Result;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

/// Default truncation depth for the Landau–Ramanujan product; factor `k`
/// contributes `1 + O(2^{−2^k})`, so 12 is far below double precision.
pub const DEFAULT_K_MAX: u32 = 12;

/// Landau–Ramanujan constant from the `2^k` product, truncated at `k_max`.
pub fn landau_ramanujan(k_max: u32) -> Result<f64> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be ≥ 1".into()));
    }
    let chi4 = crate::characters::chi_minus4();
    let mut k_val = 1.0 / SQRT_2;
    for k in 1..=k_max.min(64) {
        let s = 2f64.powi(k as i32);
        let zeta = riemann_zeta(s, 1e-13)?.real();
        let l = l_value(&chi4, s, 1e-13)?.real();
        let factor = zeta * (1.0 - 2f64.powf(-s)) / l;
        k_val *= factor.powf(2f64.powi(-(k as i32) - 1));
    }
    Ok(k_val)
}

fn landau_k() -> f64 {
    static K: OnceLock<f64> = OnceLock::new();
    *K.get_or_init(|| landau_ramanujan(DEFAULT_K_MAX).expect("K converges"))
}

/// `∏_{p ≡ 3 (4)} (1 − p⁻²)^{−1/4}` through the K-relation.
fn three_mod_four_quarter_product() -> f64 {
    (SQRT_2 * landau_k()).sqrt()
}

/// `Γ(1/4)` via `Γ(1/4)² = 2·√(2π)·π / agm(1, √2)`; accurate to full double
/// precision and cached.
pub fn gamma_quarter() -> f64 {
    static G: OnceLock<f64> = OnceLock::new();
    *G.get_or_init(|| {
        let (mut a, mut b) = (1.0f64, SQRT_2);
        for _ in 0..8 {
            (a, b) = (0.5 * (a + b), (a * b).sqrt());
        }
        (2.0 * (2.0 * PI).sqrt() * PI / a).sqrt()
    })
}

/// Gamma function for real positive arguments (Lanczos, g = 7); general
/// helper for reflection/recurrence cross-checks and reports.
pub fn gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.5203681218851,
        -1259.1392167224028,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507343278686905,
        -0.13857109526572012,
        9.984_369_578_019_572e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = G[0];
    for (i, &c) in G.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// `C_q = 2π^{−1/4}/Γ(1/4) · ∏_{p≡3(4)}(1−p⁻²)^{−1/4} · ∏_{p|q, p≡3(4)}(1−1/p)^{1/2}`.
pub fn c_q(q: u64) -> Result<f64> {
    if q == 0 {
        return Err(Error::InvalidModulus);
    }
    let mut finite = 1.0;
    for &(p, _) in &factorize(q) {
        if p % 4 == 3 {
            finite *= (1.0 - 1.0 / p as f64).sqrt();
        }
    }
    Ok(2.0 * PI.powf(-0.25) / gamma_quarter() * three_mod_four_quarter_product() * finite)
}

/// `G(1/2,χ)` for real `χ`:
/// `(1−χ(2)/√2)^{−1/2}·(1−𝟏_{2∤q}/2)^{1/4}·∏_{p≡3(4), p∤q}(1−p⁻²)^{−1/4}`.
pub fn g_half(chi: &Character) -> Result<f64> {
    if !chi.is_real() {
        return Err(Error::Domain("G(1/2,χ) requires a real character".into()));
    }
    let q = chi.modulus();
    let two_adic = (1.0 - chi.real_value(2) as f64 / SQRT_2).powf(-0.5);
    let odd_q = if q % 2 == 1 { 0.5f64.powf(0.25) } else { 1.0 };
    let mut product = three_mod_four_quarter_product();
    for &(p, _) in &factorize(q) {
        if p % 4 == 3 {
            // divide the p | q factor back out
            product *= (1.0 - (p as f64).powi(-2)).powf(0.25);
        }
    }
    Ok(two_adic * odd_q * product)
}

/// Which race constant a [`BiasConstant`] is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantKind {
    /// `C_{q,a,b}` (sum-of-two-squares race).
    TwoSquares,
    /// `D_{q,a,b}` (ω/Ω races).
    Omega,
}

/// Which L-values enter the per-character terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LConvention {
    /// Characters at modulus `q`, twists at modulus `lcm(q, 4)` — the literal
    /// reading of the defining sums (missing Euler factors included).
    ModulusQ,
    /// Each character replaced by the primitive character inducing it.
    Primitive,
}

/// A race constant with its per-character decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct BiasConstant {
    pub q: u64,
    pub a: u64,
    pub b: u64,
    pub kind: ConstantKind,
    pub convention: LConvention,
    pub value: f64,
    /// `(character index in the canonical group order, term value)` for every
    /// real character.
    pub per_character_terms: Vec<(usize, f64)>,
}

fn check_pair(q: u64, a: u64, b: u64, two_squares: bool) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidModulus);
    }
    if gcd(a % q, q) != 1 || gcd(b % q, q) != 1 {
        return Err(Error::Domain(format!(
            "residues ({a}, {b}) must be coprime to {q}"
        )));
    }
    if two_squares {
        let g4 = gcd(4, q);
        if a % g4 != 1 % g4 || b % g4 != 1 % g4 {
            return Err(Error::Domain(format!(
                "residues ({a}, {b}) must be ≡ 1 (mod {g4}): S has no elements ≡ 3 (mod 4)"
            )));
        }
    }
    Ok(())
}

fn bias_constant(
    q: u64,
    a: u64,
    b: u64,
    kind: ConstantKind,
    convention: LConvention,
) -> Result<BiasConstant> {
    check_pair(q, a, b, kind == ConstantKind::TwoSquares)?;
    let group = build_group(q)?;
    let mut terms = Vec::new();
    let mut value = 0.0;
    for (index, chi) in group.characters().iter().enumerate() {
        if !chi.is_real() {
            continue;
        }
        let diff = (chi.real_value(a as i64) - chi.real_value(b as i64)) as f64;
        // principal-type characters (and any χ agreeing on a, b) contribute 0
        let term = if diff == 0.0 {
            0.0
        } else {
            let eval_chi = match convention {
                LConvention::ModulusQ => chi.clone(),
                LConvention::Primitive => chi.primitive(),
            };
            match kind {
                ConstantKind::TwoSquares => {
                    let two_adic = (1.0 - chi.real_value(2) as f64 / SQRT_2).powf(-0.5);
                    diff * two_adic * l_half_product(&eval_chi)?
                }
                ConstantKind::Omega => diff * l_value(&eval_chi, 0.5, DEFAULT_TOL)?.real(),
            }
        };
        terms.push((index, term));
        value += term;
    }
    Ok(BiasConstant {
        q,
        a,
        b,
        kind,
        convention,
        value,
        per_character_terms: terms,
    })
}

/// `C_{q,a,b} = Σ_{χ real} (χ(a)−χ(b))·(1−χ(2)/√2)^{−1/2}·√(L(½,χ)L(½,χχ₋₄))`,
/// L-values at modulus `q` (twists at `lcm(q,4)`), non-negative square roots.
pub fn c_qab(q: u64, a: u64, b: u64) -> Result<BiasConstant> {
    bias_constant(q, a, b, ConstantKind::TwoSquares, LConvention::ModulusQ)
}

/// `C_{q,a,b}` with every character replaced by its primitive version; the
/// reported companion variant.
pub fn c_qab_primitive(q: u64, a: u64, b: u64) -> Result<BiasConstant> {
    bias_constant(q, a, b, ConstantKind::TwoSquares, LConvention::Primitive)
}

/// `D_{q,a,b} = Σ_{χ real} (χ(a)−χ(b))·L(½,χ)`.
pub fn d_qab(q: u64, a: u64, b: u64) -> Result<BiasConstant> {
    bias_constant(q, a, b, ConstantKind::Omega, LConvention::ModulusQ)
}

/// `D_{q,a,b}` with primitive characters; the reported companion variant.
pub fn d_qab_primitive(q: u64, a: u64, b: u64) -> Result<BiasConstant> {
    bias_constant(q, a, b, ConstantKind::Omega, LConvention::Primitive)
}

/// Verify the generating-function identity at the Euler factor of `p`:
/// returns `|LHS − RHS|` where LHS is the local factor of `F(s,χ)` and RHS
/// the local factor of the χ-twisted square-root/2^k-product expression. The
/// `k`-product is truncated once its factors are within 1e−15 of 1.
pub fn verify_local_identity(p: u64, s: f64, chi: &Character) -> Result<f64> {
    if s.is_nan() || s <= 1.0 {
        return Err(Error::Domain(format!(
            "s = {s} must exceed 1 (absolute convergence)"
        )));
    }
    let lhs = crate::lfunc::two_squares_local_factor(chi, p, s)?;

    let one = Complex64::new(1.0, 0.0);
    let c = chi.eval(p as i64);
    let c4 = match p % 4 {
        3 => -1.0,
        _ if p == 2 => 0.0,
        _ => 1.0,
    };
    let t = c * (p as f64).powf(-s); // χ(p)·p^{−s}
    let mut sqrt_arg = (one - t) * (one - t * c4);
    if p == 2 {
        sqrt_arg *= one - t; // the (1 − χ(2)·2^{−s})^{−1} factor inside the root
    }
    let mut rhs = sqrt_arg.powf(-0.5);
    let mut u = t;
    for k in 1..=64u32 {
        u = u * u; // (χ(p)·p^{−s})^{2^k}
        let mut ratio = (one - u * c4) / (one - u);
        if p == 2 {
            ratio *= one - u;
        }
        if (ratio - one).norm() < 1e-15 {
            break;
        }
        rhs *= ratio.powf(2f64.powi(-(k as i32) - 1));
    }
    Ok((lhs - rhs).norm())
}

/// The per-character main-term coefficient, computed two independent ways.
///
/// Route A assembles `C_q·(1−χ(2)/√2)^{−1/2}·√(L(½,χ)L(½,χχ₋₄))`; Route B
/// evaluates `2^{−1/4}·M(½,χ)/Γ(1/4)` with
/// `M(½,χ) = 2√(L(½,χ)L(½,χχ₋₄))·∏_{p|q}(1−1/p)^{1/4}·L(1,χ₀χ₋₄)^{−1/4}·G(½,χ)`.
/// Returns `(Route A value, |A − B|)`.
pub fn main_term_coefficient(q: u64, chi: &Character) -> Result<(f64, f64)> {
    if chi.modulus() != q {
        return Err(Error::Domain(format!(
            "character has modulus {}, expected {q}",
            chi.modulus()
        )));
    }
    if !chi.is_real() || chi.is_principal() {
        return Err(Error::Domain(
            "main-term coefficient needs a real non-principal character".into(),
        ));
    }
    if chi.twist_minus4().is_principal() {
        // the χ₀χ₋₄-type character: it never contributes to a race
        // difference and its half-product has the opposite singularity
        return Err(Error::Domain(
            "character's mod-4 twist is principal; no main-term coefficient".into(),
        ));
    }
    let sqrt_ll = l_half_product(chi)?;
    let two_adic = (1.0 - chi.real_value(2) as f64 / SQRT_2).powf(-0.5);
    let route_a = c_q(q)? * two_adic * sqrt_ll;

    let mut unit_index = 1.0; // ∏_{p|q}(1−1/p)^{1/4}
    for &(p, _) in &factorize(q) {
        unit_index *= (1.0 - 1.0 / p as f64).powf(0.25);
    }
    let principal = build_group(q)?.principal().clone();
    let l_one = l_value(&principal.twist_minus4(), 1.0, DEFAULT_TOL)?.real();
    let m_half = 2.0 * sqrt_ll * unit_index * l_one.powf(-0.25) * g_half(chi)?;
    let route_b = 2f64.powf(-0.25) * m_half / gamma_quarter();
    Ok((route_a, (route_a - route_b).abs()))
}
