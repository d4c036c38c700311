//! Dirichlet characters stored as full value tables.
//!
//! A character of order `m` maps each unit `a mod f` to `ζ_m^k`; the table keeps the
//! exponent `k` (or `None` off the units, where the value is 0). The order is kept
//! minimal, so two equal characters have identical tables.
//!
//! Characters mod `f` are enumerated from a fixed generator list of `(Z/fZ)^*`:
//! one CRT component per prime power in increasing order of the prime, a primitive
//! root for odd primes and `{-1, 5}` for `2^k`, `k ≥ 3`. The `k`-th character mod `f`
//! (label `f.k`, counting from 0) is the `k`-th exponent vector in lexicographic
//! order, so `f.0` is always the principal character.

use num_integer::Integer;

use crate::arith::rational::{factorize, gcd_u64, lcm_u64, mod_floor, pow_mod, divisors};
use crate::arith::CycloNumber;
use crate::error::{MathError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    table: Vec<Option<u64>>,
}

impl DirichletCharacter {
    /// Normalizes the order to the smallest `m` with all values in `μ_m`.
    fn from_exponents(modulus: u64, order: u64, table: Vec<Option<u64>>) -> Self {
        let g = table
            .iter()
            .flatten()
            .fold(order, |acc, &k| gcd_u64(acc, k % order));
        DirichletCharacter {
            modulus,
            order: order / g,
            table: table.into_iter().map(|k| k.map(|k| (k % order) / g)).collect(),
        }
    }

    /// The principal character mod `modulus`.
    pub fn principal(modulus: u64) -> Self {
        assert!(modulus >= 1);
        let table = (0..modulus)
            .map(|a| (gcd_u64(a, modulus) == 1).then_some(0))
            .collect();
        DirichletCharacter {
            modulus,
            order: 1,
            table,
        }
    }

    /// The character of conductor 1.
    pub fn trivial() -> Self {
        Self::principal(1)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Exponent `k` with `χ(x) = ζ_m^k`, or `None` when `gcd(x, f) > 1`.
    pub fn exponent(&self, x: i64) -> Option<u64> {
        self.table[mod_floor(x, self.modulus) as usize]
    }

    pub fn value(&self, x: i64) -> CycloNumber {
        match self.exponent(x) {
            Some(k) => CycloNumber::root_of_unity(self.order, k as i64),
            None => CycloNumber::zero(self.order),
        }
    }

    /// Value as a complex float under `ζ_m ↦ e^{2πi/m}`.
    pub fn value_complex(&self, x: i64) -> (f64, f64) {
        match self.exponent(x) {
            Some(k) => {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / self.order as f64;
                (theta.cos(), theta.sin())
            }
            None => (0.0, 0.0),
        }
    }

    /// True for principal characters (value 1 on every unit).
    pub fn is_principal(&self) -> bool {
        self.order == 1
    }

    /// `χ(-1)`, i.e. `+1` for even and `-1` for odd characters.
    pub fn parity(&self) -> i8 {
        match self.exponent(-1) {
            Some(0) => 1,
            Some(k) if 2 * k == self.order => -1,
            _ => unreachable!("χ(-1) is ±1"),
        }
    }

    /// Smallest `d | f` such that `χ` is trivial on units `≡ 1 mod d`.
    pub fn conductor(&self) -> u64 {
        let f = self.modulus;
        for d in divisors(f) {
            let trivial_on_kernel = (0..f)
                .filter(|&a| a % d == 1 % d)
                .all(|a| matches!(self.table[a as usize], Some(0) | None));
            if trivial_on_kernel {
                return d;
            }
        }
        f
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// The primitive character mod the conductor inducing this one.
    pub fn primitive(&self) -> Self {
        let d = self.conductor();
        if d == self.modulus {
            return self.clone();
        }
        let table = (0..d)
            .map(|b| {
                if gcd_u64(b, d) != 1 {
                    return None;
                }
                let lift = (0..self.modulus / d)
                    .map(|j| b + j * d)
                    .find(|&a| gcd_u64(a, self.modulus) == 1)
                    .expect("a unit lift exists for every unit mod the conductor");
                self.table[lift as usize]
            })
            .collect();
        Self::from_exponents(d, self.order, table)
    }

    /// Pointwise product on residues mod the lcm of the moduli.
    pub fn mul(&self, other: &Self) -> Self {
        let f = lcm_u64(self.modulus, other.modulus);
        let m = lcm_u64(self.order, other.order);
        let (sa, sb) = (m / self.order, m / other.order);
        let table = (0..f)
            .map(|a| {
                let x = self.table[(a % self.modulus) as usize]?;
                let y = other.table[(a % other.modulus) as usize]?;
                Some((x * sa + y * sb) % m)
            })
            .collect();
        Self::from_exponents(f, m, table)
    }

    pub fn pow(&self, e: i64) -> Self {
        let m = self.order as i64;
        let table = self
            .table
            .iter()
            .map(|k| k.map(|k| ((k as i64 * e).rem_euclid(m)) as u64))
            .collect();
        Self::from_exponents(self.modulus, self.order, table)
    }

    /// Complex conjugate, the inverse in the character group.
    pub fn conj(&self) -> Self {
        self.pow(-1)
    }
}

/// The fixed generator list of `(Z/fZ)^*` as `(residue mod f, order)` pairs.
pub fn unit_generators(f: u64) -> Vec<(u64, u64)> {
    let mut gens = Vec::new();
    for (p, e) in factorize(f) {
        let pe = p.pow(e);
        let local: Vec<(u64, u64)> = if p == 2 {
            match e {
                1 => vec![],
                2 => vec![(3, 2)],
                _ => vec![(pe - 1, 2), (5, pe / 4)],
            }
        } else {
            vec![(primitive_root(p, e), pe / p * (p - 1))]
        };
        let rest = f / pe;
        for (g, ord) in local {
            gens.push((crt_pair(g, pe, 1, rest), ord));
        }
    }
    gens
}

/// Smallest primitive root mod `p^e` for an odd prime `p`.
pub fn primitive_root(p: u64, e: u32) -> u64 {
    let pe = p.pow(e);
    let phi = pe / p * (p - 1);
    let prime_factors: Vec<u64> = factorize(phi).into_iter().map(|(q, _)| q).collect();
    (2..pe)
        .find(|&g| {
            gcd_u64(g, p) == 1 && prime_factors.iter().all(|&q| pow_mod(g, phi / q, pe) != 1)
        })
        .expect("odd prime powers have primitive roots")
}

fn crt_pair(a: u64, m: u64, b: u64, n: u64) -> u64 {
    if n == 1 {
        return a % m;
    }
    let ext = (m as i64).extended_gcd(&(n as i64));
    debug_assert_eq!(ext.gcd, 1);
    let mn = (m * n) as i128;
    // x = a + m·((b - a)·m^{-1} mod n)
    let minv = ext.x as i128;
    let t = ((b as i128 - a as i128) * minv).rem_euclid(n as i128);
    ((a as i128 + m as i128 * t).rem_euclid(mn)) as u64
}

/// All `φ(f)` characters mod `f` in label order (`f.0`, `f.1`, ...).
pub fn char_enumerate(f: u64) -> Vec<DirichletCharacter> {
    assert!(f >= 1, "modulus must be positive");
    let gens = unit_generators(f);
    let exponent = gens.iter().fold(1, |acc, &(_, o)| lcm_u64(acc, o));
    // discrete logs: residue -> exponent vector over the generators
    let mut dlog: Vec<Option<Vec<u64>>> = vec![None; f as usize];
    for vec in exponent_vectors(&gens) {
        let residue = gens
            .iter()
            .zip(&vec)
            .fold(1 % f, |acc, (&(g, _), &e)| acc * pow_mod(g, e, f) % f);
        dlog[residue as usize] = Some(vec);
    }
    exponent_vectors(&gens)
        .map(|ks| {
            let table = dlog
                .iter()
                .map(|d| {
                    d.as_ref().map(|es| {
                        gens.iter()
                            .zip(&ks)
                            .zip(es)
                            .map(|((&(_, o), &k), &e)| k * e % o * (exponent / o))
                            .sum::<u64>()
                            % exponent
                    })
                })
                .collect();
            DirichletCharacter::from_exponents(f, exponent, table)
        })
        .collect()
}

fn exponent_vectors(gens: &[(u64, u64)]) -> impl Iterator<Item = Vec<u64>> + '_ {
    let total: u64 = gens.iter().map(|&(_, o)| o).product();
    (0..total).map(move |mut idx| {
        let mut v = vec![0; gens.len()];
        for (slot, &(_, o)) in v.iter_mut().zip(gens).rev() {
            *slot = idx % o;
            idx /= o;
        }
        v
    })
}

/// `q = p` for odd `p`, `q = 4` for `p = 2`.
pub fn teichmuller_modulus(p: u64) -> u64 {
    if p == 2 {
        4
    } else {
        p
    }
}

/// The generator `g` of `(Z/qZ)^*` with `ω(g) = ζ_{φ(q)}`.
pub fn teichmuller_generator(p: u64) -> u64 {
    unit_generators(teichmuller_modulus(p))[0].0
}

/// The Teichmüller character mod `q`, of order `p - 1` (order 2 for `p = 2`).
pub fn teichmuller_char(p: u64) -> Result<DirichletCharacter> {
    if !crate::arith::rational::is_prime(p) {
        return Err(MathError::InvalidPrime(p));
    }
    if p == 3 || p == 2 {
        // (Z/qZ)^* has order 2 and ω is its nontrivial character
        return Ok(char_enumerate(teichmuller_modulus(p)).swap_remove(1));
    }
    Ok(char_enumerate(p).swap_remove(1))
}

/// The twist `χ_n = χ ω^{-n}`, reduced to its conductor.
pub fn twist(chi: &DirichletCharacter, n: i64, p: u64) -> Result<DirichletCharacter> {
    let omega = teichmuller_char(p)?;
    Ok(chi.mul(&omega.pow(-n)).primitive())
}

/// Parses `triv` or `f.k`.
pub fn parse_label(label: &str) -> Result<DirichletCharacter> {
    let unknown = || MathError::UnknownCharacter(label.to_string());
    if label == "triv" {
        return Ok(DirichletCharacter::trivial());
    }
    let (f, k) = label.split_once('.').ok_or_else(unknown)?;
    let f: u64 = f.parse().map_err(|_| unknown())?;
    let k: usize = k.parse().map_err(|_| unknown())?;
    if f == 0 || f > 10_000 {
        return Err(unknown());
    }
    char_enumerate(f).into_iter().nth(k).ok_or_else(unknown)
}

/// Characters mod `f` paired with their labels.
pub fn labeled(f: u64) -> Vec<(String, DirichletCharacter)> {
    char_enumerate(f)
        .into_iter()
        .enumerate()
        .map(|(k, c)| (format!("{f}.{k}"), c))
        .collect()
}
