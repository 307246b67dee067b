//! Cross-checks of the evaluation machinery against independent oracles:
//! alternating-series zeta values, quadrature for Γ(1/4), direct truncated
//! prime products, and brute-force arithmetic.

mod common;

use s2sq::characters::{build_group, is_quadratic_residue};
use s2sq::constants;
use s2sq::lfunc;

#[test]
fn zeta_half_matches_alternating_series_oracle() {
    let oracle = common::zeta_alternating(0.5);
    assert!((oracle - -1.4603545088095868).abs() < 1e-12);
    let ours = lfunc::hurwitz_zeta(0.5, 1.0, 1e-12).unwrap().real();
    assert!((ours - oracle).abs() < 1e-11, "{ours} vs {oracle}");
}

#[test]
fn hurwitz_matches_hermite_integral_oracle() {
    for s in [0.5, 0.75, 1.5, 2.0, 3.5] {
        for a in [0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
            let ours = lfunc::hurwitz_zeta(s, a, 1e-12).unwrap().real();
            let oracle = common::hurwitz_hermite(s, a);
            assert!(
                (ours - oracle).abs() < 1e-9,
                "s={s} a={a}: {ours} vs {oracle}"
            );
        }
    }
}

#[test]
fn gamma_quarter_matches_quadrature_oracle() {
    let oracle = common::gamma_quarter_quadrature();
    let ours = constants::gamma_quarter();
    assert!((ours - oracle).abs() < 1e-10, "{ours} vs {oracle}");
}

#[test]
fn landau_ramanujan_matches_direct_prime_product() {
    let k = constants::landau_ramanujan(12).unwrap();
    let direct = common::landau_direct_product(1_000_000);
    assert!((k - direct).abs() < 1e-6, "{k} vs {direct}");
}

#[test]
fn c_1_infinite_product_route_matches_direct_truncation() {
    // C_1 = 2π^{−1/4}/Γ(1/4) · ∏_{p≡3(4)}(1−p⁻²)^{−1/4}
    let direct = 2.0 * std::f64::consts::PI.powf(-0.25) / constants::gamma_quarter()
        * common::quarter_product_direct(1_000_000, &[]);
    let ours = constants::c_q(1).unwrap();
    assert!((ours - direct).abs() < 1e-6, "{ours} vs {direct}");
}

#[test]
fn g_half_matches_direct_truncation_mod_3() {
    let chi = build_group(3)
        .unwrap()
        .characters()
        .iter()
        .find(|c| !c.is_principal())
        .unwrap()
        .clone();
    let ours = constants::g_half(&chi).unwrap();
    let sqrt2 = std::f64::consts::SQRT_2;
    let direct = (1.0 + 1.0 / sqrt2).powf(-0.5)
        * 0.5f64.powf(0.25)
        * common::quarter_product_direct(1_000_000, &[3]);
    assert!((ours - direct).abs() < 1e-6, "{ours} vs {direct}");
}

#[test]
fn quadratic_residues_match_real_character_criterion() {
    // a is a QR mod q ⇔ χ(a) = 1 for every real χ mod q, for all q ≤ 100
    for q in 1..=100u64 {
        let group = build_group(q).unwrap();
        let reals = group.real_characters();
        for a in 0..q.max(1) {
            if s2sq::arith::gcd(a, q) != 1 {
                continue;
            }
            let brute = is_quadratic_residue(a, q).unwrap();
            let by_chars = reals.iter().all(|chi| chi.real_value(a as i64) == 1);
            assert_eq!(brute, by_chars, "q={q} a={a}");
        }
    }
}

#[test]
fn orthogonality_exact_on_exponents_up_to_100() {
    // Integer-only check: for χ ≠ ψ the product χ·ψ̄ is a non-principal
    // character, so each of its root-of-unity values is attained equally
    // often over the units and the value sum vanishes exactly.
    for q in 1..=100u64 {
        let group = build_group(q).unwrap();
        let chars = group.characters();
        for (i, chi) in chars.iter().enumerate() {
            for (j, psi) in chars.iter().enumerate() {
                let m = s2sq::arith::lcm(chi.root_order() as u64, psi.root_order() as u64);
                let mut counts = std::collections::HashMap::new();
                for n in 0..q.max(1) {
                    let (Some(e1), Some(e2)) = (chi.exponent(n as i64), psi.exponent(n as i64))
                    else {
                        continue;
                    };
                    // exponent of χ(n)·conj(ψ(n)) as an m-th root of unity
                    let a = e1 as u64 * (m / chi.root_order() as u64);
                    let b = e2 as u64 * (m / psi.root_order() as u64);
                    *counts.entry((a + m - b) % m).or_insert(0u64) += 1;
                }
                if i == j {
                    assert_eq!(counts.len(), 1, "q={q}: χ·χ̄ must be constant 1");
                    assert_eq!(counts[&0], group.order());
                } else {
                    // uniform multiplicity over a full set of d-th roots, d > 1
                    let multiplicities: Vec<u64> = counts.values().copied().collect();
                    assert!(counts.len() > 1, "q={q} i={i} j={j}");
                    assert!(
                        multiplicities.iter().all(|&c| c == multiplicities[0]),
                        "q={q} i={i} j={j}: non-uniform value counts {counts:?}"
                    );
                    // the attained exponents are exactly the multiples of m/d
                    let d = counts.len() as u64;
                    assert_eq!(m % d, 0);
                    assert!(counts.keys().all(|&e| e % (m / d) == 0));
                }
            }
        }
    }
}

#[test]
fn orthogonality_up_to_100() {
    for q in 31..=100u64 {
        let group = build_group(q).unwrap();
        let phi_q = group.order() as f64;
        let chars = group.characters();
        for (i, chi) in chars.iter().enumerate() {
            for (j, psi) in chars.iter().enumerate() {
                let mut sum = num_complex::Complex64::new(0.0, 0.0);
                for n in 0..q {
                    sum += chi.eval(n as i64) * psi.eval(n as i64).conj();
                }
                sum /= phi_q;
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (sum.re - expected).abs() < 1e-12 && sum.im.abs() < 1e-12,
                    "q={q} i={i} j={j}"
                );
            }
        }
    }
}

#[test]
fn two_squares_indicator_matches_bruteforce_on_sample() {
    let bits = s2sq::sieve::sieve_two_squares_lattice(1, 3_001).unwrap();
    for n in 1..3_001u64 {
        let expected = common::two_squares_bruteforce(n);
        let got = bits[((n - 1) / 64) as usize] >> ((n - 1) % 64) & 1 == 1;
        assert_eq!(got, expected, "n = {n}");
    }
}

#[test]
fn additive_tables_match_trial_division_on_sample() {
    let primes = s2sq::sieve::base_primes(1000);
    let (omega, big_omega) = s2sq::sieve::sieve_additive(500_000, 505_000, &primes).unwrap();
    for (idx, n) in (500_000u64..505_000).enumerate() {
        let (o, b) = common::trial_omega(n);
        assert_eq!(omega[idx], o, "ω({n})");
        assert_eq!(big_omega[idx], b, "Ω({n})");
    }
}
