//! Independent oracles used by the integration and acceptance suites.
//!
//! Everything here deliberately avoids the library's own evaluation paths:
//! plain trial division, a separately written prime sieve, alternating-series
//! acceleration for zeta values, adaptive quadrature for Γ(1/4), and direct
//! truncated prime products with tail corrections.

#![allow(dead_code)]

/// Primes up to `n` (odd-only tabulation, unlike the library's sieve).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut out = vec![2u64];
    // index i represents the odd number 2i + 3
    let m = (n.saturating_sub(1)) / 2;
    let mut composite = vec![false; m];
    for i in 0..m {
        if composite[i] {
            continue;
        }
        let p = 2 * i + 3;
        if p * p > n {
            break;
        }
        let mut j = (p * p - 3) / 2;
        while j < m {
            composite[j] = true;
            j += p;
        }
    }
    out.extend((0..m).filter(|&i| !composite[i]).map(|i| (2 * i + 3) as u64));
    out
}

/// (ω, Ω) by trial division.
pub fn trial_omega(mut n: u64) -> (u8, u8) {
    let mut omega = 0u8;
    let mut big = 0u8;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            omega += 1;
            while n.is_multiple_of(p) {
                n /= p;
                big += 1;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        omega += 1;
        big += 1;
    }
    (omega, big)
}

/// Membership in S by exhaustive search over `a² + b² = n`.
pub fn two_squares_bruteforce(n: u64) -> bool {
    let mut a = 0u64;
    while a * a * 2 <= n {
        let rest = n - a * a;
        let b = rest.isqrt();
        if b * b == rest {
            return true;
        }
        a += 1;
    }
    false
}

/// Accelerated alternating sum `Σ_{k≥0} (−1)^k f(k)`
/// (Cohen–Rodriguez Villegas–Zagier, with `n` Chebyshev steps).
pub fn alternating_sum(f: impl Fn(u64) -> f64, n: usize) -> f64 {
    let mut d = (3.0 + 8f64.sqrt()).powi(n as i32);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut s = 0.0;
    for k in 0..n {
        c = b - c;
        s += c * f(k as u64);
        let kf = k as f64;
        b *= (kf + n as f64) * (kf - n as f64) / ((kf + 0.5) * (kf + 1.0));
    }
    s / d
}

/// `ζ(s)` from the alternating series `η(s) = (1 − 2^{1−s})·ζ(s)`.
pub fn zeta_alternating(s: f64) -> f64 {
    let eta = alternating_sum(|k| ((k + 1) as f64).powf(-s), 48);
    eta / (1.0 - 2f64.powf(1.0 - s))
}

/// `ζ(s, a)` from Hermite's integral representation (Abel–Plana type):
/// `ζ(s,a) = a^{−s}/2 + a^{1−s}/(s−1)
///            + 2∫₀^∞ sin(s·atan(x/a))·(a²+x²)^{−s/2}/(e^{2πx}−1) dx`,
/// valid for all real `s ≠ 1`, `a > 0`; independent of Euler–Maclaurin.
pub fn hurwitz_hermite(s: f64, a: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let integrand = move |x: f64| {
        if x < 1e-100 {
            // limit as x → 0
            return s * a.powf(-s - 1.0) / tau;
        }
        (s * (x / a).atan()).sin() * (a * a + x * x).powf(-0.5 * s) / ((tau * x).exp_m1())
    };
    let integral = adaptive_simpson(&integrand, 0.0, 16.0, 1e-14);
    0.5 * a.powf(-s) + a.powf(1.0 - s) / (s - 1.0) + 2.0 * integral
}

/// Adaptive Simpson quadrature.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, m: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
    }
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, 0.5 * (a + m), m);
        let right = simpson(f, m, 0.5 * (m + b), b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            recurse(f, a, m, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, right, 0.5 * tol, depth - 1)
        }
    }
    let m = 0.5 * (lo + hi);
    recurse(f, lo, hi, simpson(f, lo, m, hi), tol, 48)
}

/// `Γ(1/4) = ∫₀^∞ t^{−3/4} e^{−t} dt`, with the singular part transformed to
/// `4·∫₀^1 e^{−u⁴} du`.
pub fn gamma_quarter_quadrature() -> f64 {
    let smooth = adaptive_simpson(&|u: f64| (-u.powi(4)).exp(), 0.0, 1.0, 1e-13);
    let tail = adaptive_simpson(&|t: f64| t.powf(-0.75) * (-t).exp(), 1.0, 60.0, 1e-13);
    4.0 * smooth + tail
}

/// Direct truncated Landau–Ramanujan product over sieved primes with a tail
/// correction: `log K − log K_P ≈ Σ_{p>P, p≡3(4)} p⁻²/2 ≈ 1/(4·P·ln P)`.
pub fn landau_direct_product(limit: u64) -> f64 {
    let mut log_k = -0.5 * 2f64.ln();
    for p in primes_up_to(limit) {
        if p % 4 == 3 {
            let pf = p as f64;
            log_k += -0.5 * (1.0 - pf.powi(-2)).ln();
        }
    }
    let tail = 1.0 / (4.0 * limit as f64 * (limit as f64).ln());
    (log_k + tail).exp()
}

/// Direct truncated `∏_{p≡3(4), p∤skip} (1 − p⁻²)^{−1/4}` with tail
/// correction `1/(8·P·ln P)`.
pub fn quarter_product_direct(limit: u64, skip: &[u64]) -> f64 {
    let mut log_p = 0.0;
    for p in primes_up_to(limit) {
        if p % 4 == 3 && !skip.contains(&p) {
            let pf = p as f64;
            log_p += -0.25 * (1.0 - pf.powi(-2)).ln();
        }
    }
    let tail = 1.0 / (8.0 * limit as f64 * (limit as f64).ln());
    (log_p + tail).exp()
}
