//! Dirichlet character groups with exact root-of-unity arithmetic.
//!
//! A character modulo `q` is stored as a table of exponents: entry `Some(e)`
//! at residue `n` means `χ(n) = exp(2πi·e/order)`, `None` means
//! `gcd(n, q) > 1` and `χ(n) = 0`. Orthogonality and multiplicativity tests
//! can therefore run on exact integers; real characters additionally expose a
//! `±1/0` fast path for the sieve race loops.
//!
//! Groups are built by CRT over the prime-power factors of `q`: a primitive
//! root generates the units modulo an odd prime power, and `⟨−1, 5⟩`
//! generates them modulo `2^e` for `e ≥ 3`.

use crate::arith::{factorize, gcd, lcm, mod_pow, phi};
use crate::error::Error;
use crate::Result;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Largest modulus for which a full character group will be constructed.
/// Tables are dense (`φ(q)` characters × `q` entries), so the cost grows
/// like `q·φ(q)`; 4096 keeps the worst case under ~70 MB.
pub const MAX_GROUP_MODULUS: u64 = 4096;

/// A Dirichlet character modulo `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    modulus: u64,
    group_order: u64,
    /// Common root-of-unity order; minimal after normalization.
    order: u32,
    /// `exponents[n] = Some(e)` ⇔ `χ(n) = exp(2πi·e/order)`; `None` ⇔ `χ(n) = 0`.
    exponents: Vec<Option<u32>>,
    is_principal: bool,
    is_real: bool,
}

impl Character {
    fn from_exponents(modulus: u64, order: u32, exponents: Vec<Option<u32>>) -> Character {
        let mut chi = Character {
            modulus,
            group_order: phi(modulus),
            order,
            exponents,
            is_principal: false,
            is_real: false,
        };
        chi.normalize();
        chi.is_principal = chi.order == 1;
        chi.is_real = chi.order <= 2;
        chi
    }

    /// Reduce to the minimal common root-of-unity order, so structurally
    /// equal characters compare equal regardless of how they were built.
    fn normalize(&mut self) {
        let mut g = self.order as u64;
        for e in self.exponents.iter().flatten() {
            g = gcd(g, *e as u64);
            if g == 1 {
                return;
            }
        }
        let g = g as u32;
        self.order /= g;
        for e in self.exponents.iter_mut().flatten() {
            *e /= g;
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `φ(q)`, the order of the full character group.
    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    /// Order of the common root of unity in the exponent table.
    pub fn root_order(&self) -> u32 {
        self.order
    }

    pub fn is_principal(&self) -> bool {
        self.is_principal
    }

    /// True iff every value lies in `{−1, 0, +1}`, i.e. `χ² = χ₀`.
    pub fn is_real(&self) -> bool {
        self.is_real
    }

    /// Exponent `e` with `χ(n) = exp(2πi·e/order)`, or `None` when `χ(n) = 0`.
    /// `n` is reduced to the canonical residue first.
    pub fn exponent(&self, n: i64) -> Option<u32> {
        let r = n.rem_euclid(self.modulus as i64) as usize;
        self.exponents[r]
    }

    /// Evaluate `χ(n)` as a complex number.
    pub fn eval(&self, n: i64) -> Complex64 {
        match self.exponent(n) {
            None => Complex64::new(0.0, 0.0),
            Some(0) => Complex64::new(1.0, 0.0),
            Some(e) => {
                if 2 * e == self.order {
                    Complex64::new(-1.0, 0.0)
                } else {
                    let (s, c) = (TAU * e as f64 / self.order as f64).sin_cos();
                    Complex64::new(c, s)
                }
            }
        }
    }

    /// Exact `χ(n) ∈ {−1, 0, +1}` for real characters; the hot-loop path.
    ///
    /// Panics if the value at `n` is not real.
    pub fn real_value(&self, n: i64) -> i8 {
        match self.exponent(n) {
            None => 0,
            Some(0) => 1,
            Some(e) if 2 * e == self.order => -1,
            Some(_) => panic!("character value at {n} is not real"),
        }
    }

    /// The character modulo `lcm(q, 4)` with values `χ(n)·χ₋₄(n)`.
    pub fn twist_minus4(&self) -> Character {
        let q = self.modulus;
        let new_mod = lcm(q, 4);
        let m = lcm(self.order as u64, 2) as u32;
        let scale = m / self.order;
        let exponents = (0..new_mod)
            .map(|n| {
                if gcd(n, new_mod) != 1 {
                    return None;
                }
                let base = self.exponents[(n % q) as usize].expect("unit mod lcm is unit mod q");
                let twist = if n % 4 == 3 { m / 2 } else { 0 };
                Some((base * scale + twist) % m)
            })
            .collect();
        Character::from_exponents(new_mod, m, exponents)
    }

    /// Smallest `f | q` such that the character factors through `(ℤ/fℤ)*`.
    pub fn conductor(&self) -> u64 {
        let q = self.modulus;
        'next: for f in (1..=q).filter(|f| q.is_multiple_of(*f)) {
            for n in 1..=q {
                if gcd(n, q) == 1 && n % f == 1 % f && self.exponents[(n % q) as usize] != Some(0) {
                    continue 'next;
                }
            }
            return f;
        }
        unreachable!("every character factors through its own modulus")
    }

    /// The primitive character inducing this one (itself when already
    /// primitive).
    pub fn primitive(&self) -> Character {
        let q = self.modulus;
        let f = self.conductor();
        if f == q {
            return self.clone();
        }
        let exponents = (0..f)
            .map(|r| {
                if gcd(r, f) != 1 {
                    return None;
                }
                // some n ≡ r (mod f) coprime to q exists below q
                let n = (r..)
                    .step_by(f.max(1) as usize)
                    .find(|&n| gcd(n, q) == 1)
                    .expect("unit class mod f contains a unit mod q");
                self.exponents[(n % q) as usize]
            })
            .collect();
        Character::from_exponents(f, self.order, exponents)
    }

    /// Lift to a multiple of the modulus: same values on residues coprime to
    /// `new_modulus`, zero elsewhere (the imprimitive character induced at
    /// `new_modulus`).
    pub fn lift_to(&self, new_modulus: u64) -> Result<Character> {
        if new_modulus == 0 || !new_modulus.is_multiple_of(self.modulus) {
            return Err(Error::Domain(format!(
                "{new_modulus} is not a multiple of {}",
                self.modulus
            )));
        }
        let exponents = (0..new_modulus)
            .map(|n| {
                if gcd(n, new_modulus) != 1 {
                    None
                } else {
                    self.exponents[(n % self.modulus) as usize]
                }
            })
            .collect();
        Ok(Character::from_exponents(
            new_modulus,
            self.order,
            exponents,
        ))
    }
}

/// The full group of Dirichlet characters modulo `q`, canonically ordered
/// (lexicographic on exponent tables, so the principal character is index 0
/// and runs are reproducible).
#[derive(Clone, Debug)]
pub struct CharacterGroup {
    modulus: u64,
    characters: Vec<Character>,
}

impl CharacterGroup {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `φ(q)`.
    pub fn order(&self) -> u64 {
        self.characters.len() as u64
    }

    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    pub fn get(&self, index: usize) -> Option<&Character> {
        self.characters.get(index)
    }

    /// Index 0 in canonical order.
    pub fn principal(&self) -> &Character {
        &self.characters[0]
    }

    /// All real characters, principal included.
    pub fn real_characters(&self) -> Vec<&Character> {
        self.characters.iter().filter(|c| c.is_real()).collect()
    }

    pub fn index_of(&self, chi: &Character) -> Option<usize> {
        self.characters.iter().position(|c| c == chi)
    }
}

/// Generators of `(ℤ/qℤ)*` as (generator, order) pairs, CRT-lifted to mod `q`.
fn unit_group_generators(q: u64) -> Vec<(u64, u64)> {
    let mut gens = Vec::new();
    for &(p, e) in &factorize(q) {
        let pe = p.pow(e);
        let rest = q / pe;
        // x ≡ g (mod p^e), x ≡ 1 (mod q/p^e)
        let crt = |g: u64| -> u64 {
            if rest == 1 {
                return g % q;
            }
            let inv = mod_inverse(pe % rest, rest);
            let diff = (1 + rest - g % rest) % rest;
            (g + pe * ((diff * inv) % rest)) % q
        };
        if p == 2 {
            match e {
                1 => {}
                2 => gens.push((crt(3), 2)),
                _ => {
                    gens.push((crt(pe - 1), 2)); // −1
                    gens.push((crt(5), pe / 4)); // 5 has order 2^(e−2)
                }
            }
        } else {
            let g = primitive_root_odd_prime_power(p, e);
            gens.push((crt(g), pe / p * (p - 1)));
        }
    }
    gens
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    // extended Euclid; gcd(a, m) = 1 by construction
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m as i64, (a % m) as i64);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(m as i64) as u64
}

fn primitive_root_odd_prime_power(p: u64, e: u32) -> u64 {
    let order = p - 1;
    let factors = factorize(order);
    let g = (2..p)
        .find(|&g| factors.iter().all(|&(f, _)| mod_pow(g, order / f, p) != 1))
        .expect("every odd prime has a primitive root");
    if e == 1 {
        return g;
    }
    // g generates mod p^e for all e ≥ 2 iff g^(p−1) ≠ 1 mod p²
    let p2 = p * p;
    if mod_pow(g, p - 1, p2) != 1 {
        g
    } else {
        g + p
    }
}

/// Construct all `φ(q)` Dirichlet characters modulo `q`.
pub fn build_group(q: u64) -> Result<CharacterGroup> {
    if q == 0 {
        return Err(Error::InvalidModulus);
    }
    if q > MAX_GROUP_MODULUS {
        return Err(Error::Resource(format!(
            "character tables for q = {q} exceed the configured budget (max {MAX_GROUP_MODULUS})"
        )));
    }
    let gens = unit_group_generators(q);
    let orders: Vec<u64> = gens.iter().map(|&(_, d)| d).collect();
    let m = orders.iter().copied().fold(1u64, lcm).max(1) as u32;

    // Discrete-log tuple of every unit, by enumerating the generator lattice.
    let pows: Vec<Vec<u64>> = gens
        .iter()
        .map(|&(g, d)| {
            let mut v = Vec::with_capacity(d as usize);
            let mut x = 1u64;
            for _ in 0..d {
                v.push(x);
                x = ((x as u128 * g as u128) % q.max(1) as u128) as u64;
            }
            v
        })
        .collect();
    let mut dlog: Vec<Option<Vec<u64>>> = vec![None; q as usize];
    let mut tuple = vec![0u64; gens.len()];
    loop {
        let residue = tuple
            .iter()
            .zip(&pows)
            .fold(1 % q, |acc, (&t, pw)| {
                ((acc as u128 * pw[t as usize] as u128) % q as u128) as u64
            });
        dlog[residue as usize] = Some(tuple.clone());
        // odometer
        let mut i = 0;
        loop {
            if i == tuple.len() {
                break;
            }
            tuple[i] += 1;
            if tuple[i] < orders[i] {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == tuple.len() {
            break;
        }
    }

    // One character per exponent tuple k: χ(g_i) = exp(2πi·k_i/d_i).
    let mut characters = Vec::new();
    let mut k = vec![0u64; gens.len()];
    loop {
        let exponents: Vec<Option<u32>> = dlog
            .iter()
            .map(|dl| {
                dl.as_ref().map(|a| {
                    let e: u64 = a
                        .iter()
                        .zip(&k)
                        .zip(&orders)
                        .map(|((&ai, &ki), &di)| ai * ki % di * (m as u64 / di) % m as u64)
                        .sum();
                    (e % m as u64) as u32
                })
            })
            .collect();
        characters.push(Character::from_exponents(q, m, exponents));
        let mut i = 0;
        loop {
            if i == k.len() {
                break;
            }
            k[i] += 1;
            if k[i] < orders[i] {
                break;
            }
            k[i] = 0;
            i += 1;
        }
        if i == k.len() {
            break;
        }
    }
    characters.sort_by(|a, b| a.exponents.cmp(&b.exponents));
    debug_assert_eq!(characters.len() as u64, phi(q));
    Ok(CharacterGroup {
        modulus: q,
        characters,
    })
}

/// `χ₋₄`, the unique non-principal character modulo 4.
pub fn chi_minus4() -> Character {
    let exponents = vec![None, Some(0), None, Some(1)];
    Character::from_exponents(4, 2, exponents)
}

/// True iff `a ≡ x² (mod q)` is solvable; requires `gcd(a, q) = 1`.
pub fn is_quadratic_residue(a: u64, q: u64) -> Result<bool> {
    if q == 0 {
        return Err(Error::InvalidModulus);
    }
    let a = a % q;
    if gcd(a, q) != 1 {
        return Err(Error::Domain(format!("gcd({a}, {q}) > 1")));
    }
    let mut squares = vec![false; q as usize];
    for x in 0..q {
        if gcd(x, q) == 1 {
            squares[((x as u128 * x as u128) % q as u128) as usize] = true;
        }
    }
    Ok(squares[a as usize])
}
