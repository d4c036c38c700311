//! Elements of the cyclotomic fields `Q(ζ_m)`.
//!
//! An element of order `m` is a rational vector of length `deg Φ_m` holding the
//! coefficients of a polynomial in `ζ_m = e^{2πi/m}` reduced modulo the `m`-th
//! cyclotomic polynomial. Elements of different orders are combined by lifting
//! both to the lcm of the orders.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{divisors, format_rational, gcd_u64, lcm_u64, Rational};
use crate::error::{MathError, Result};

/// Precomputed data for `Q(ζ_m)`: `Φ_m` and the reductions of `x^k` for `k < m`.
#[derive(Debug)]
struct CycloField {
    degree: usize,
    phi: Vec<BigInt>,
    /// `powers[k]` = coefficients of `x^k mod Φ_m`, `k in 0..m`.
    powers: Vec<Vec<BigInt>>,
}

fn field_cache() -> &'static RwLock<HashMap<u64, Arc<CycloField>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<CycloField>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn field(m: u64) -> Arc<CycloField> {
    assert!(m >= 1, "cyclotomic order must be positive");
    if let Some(f) = field_cache().read().unwrap().get(&m) {
        return Arc::clone(f);
    }
    let phi = cyclotomic_polynomial(m);
    let degree = phi.len() - 1;
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = vec![BigInt::zero(); degree];
    cur[0] = BigInt::one();
    for _ in 0..m {
        powers.push(cur.clone());
        // multiply by x, then reduce the overflow coefficient with the monic Φ_m
        let top = cur[degree - 1].clone();
        for i in (1..degree).rev() {
            cur[i] = cur[i - 1].clone();
        }
        cur[0] = BigInt::zero();
        if !top.is_zero() {
            for i in 0..degree {
                cur[i] -= &top * &phi[i];
            }
        }
    }
    let built = Arc::new(CycloField {
        degree,
        phi,
        powers,
    });
    // idempotent: a concurrent builder produces the same table
    field_cache()
        .write()
        .unwrap()
        .entry(m)
        .or_insert_with(|| Arc::clone(&built));
    built
}

/// The `m`-th cyclotomic polynomial with integer coefficients in ascending
/// degree order, by dividing `x^m - 1` by `Φ_d` for the proper divisors `d`.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let den = match field_cache().read().unwrap().get(&d) {
            Some(f) => f.phi.clone(),
            None => cyclotomic_polynomial(d),
        };
        num = exact_div_monic(&num, &den);
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for j in 0..=dn {
            rem[i + j] -= &c * &den[j];
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// Degree of `Φ_m`, i.e. Euler's phi of `m`.
pub fn cyclotomic_degree(m: u64) -> usize {
    field(m).degree
}

#[derive(Clone, Debug)]
pub struct CycloNumber {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CycloNumber {
    pub fn zero(order: u64) -> Self {
        let d = field(order).degree;
        CycloNumber {
            order,
            coeffs: vec![Rational::zero(); d],
        }
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, Rational::one())
    }

    /// Embeds a rational as `(r, 0, ..., 0)`.
    pub fn from_rational(order: u64, r: Rational) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = r;
        z
    }

    /// `ζ_m^k` for any integer `k`.
    pub fn root_of_unity(order: u64, k: i64) -> Self {
        let f = field(order);
        let k = k.rem_euclid(order as i64) as usize;
        CycloNumber {
            order,
            coeffs: f.powers[k].iter().cloned().map(Rational::from_integer).collect(),
        }
    }

    /// Builds an element from its coefficient vector; the length must be `deg Φ_m`.
    pub fn from_coeffs(order: u64, coeffs: Vec<Rational>) -> Result<Self> {
        let d = field(order).degree;
        if coeffs.len() != d {
            return Err(MathError::Structural(format!(
                "order {order} needs {d} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(CycloNumber { order, coeffs })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element in `Q(ζ_target)`; `order` must divide `target`.
    pub fn lift(&self, target: u64) -> Result<Self> {
        if target % self.order != 0 {
            return Err(MathError::Structural(format!(
                "cannot lift order {} to order {target}",
                self.order
            )));
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let step = (target / self.order) as usize;
        let f = field(target);
        let mut out = vec![Rational::zero(); f.degree];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &f.powers[(i * step) % target as usize];
            for (o, e) in out.iter_mut().zip(row) {
                if !e.is_zero() {
                    *o += c * Rational::from_integer(e.clone());
                }
            }
        }
        Ok(CycloNumber {
            order: target,
            coeffs: out,
        })
    }

    /// Inverse of [`lift`](Self::lift): expresses the element in `Q(ζ_target)`
    /// for a divisor `target` of the order, if it lies in that subfield.
    pub fn lower(&self, target: u64) -> Option<Self> {
        if target == 0 || self.order % target != 0 {
            return None;
        }
        let step = (self.order / target) as usize;
        let big = field(self.order);
        let small = field(target);
        // columns: images of the basis ζ_target^i inside Q(ζ_order)
        let cols: Vec<&Vec<BigInt>> = (0..small.degree)
            .map(|i| &big.powers[(i * step) % self.order as usize])
            .collect();
        let rows = big.degree;
        let n = small.degree;
        let mut mat: Vec<Vec<Rational>> = (0..rows)
            .map(|r| {
                let mut row: Vec<Rational> =
                    cols.iter().map(|c| Rational::from_integer(c[r].clone())).collect();
                row.push(self.coeffs[r].clone());
                row
            })
            .collect();
        let solution = solve_linear(&mut mat, n)?;
        Some(CycloNumber {
            order: target,
            coeffs: solution,
        })
    }

    fn align(&self, other: &Self) -> (Self, Self) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let l = lcm_u64(self.order, other.order);
        (self.lift(l).unwrap(), other.lift(l).unwrap())
    }

    /// Image under the Galois automorphism `ζ ↦ ζ^k`, `gcd(k, m) = 1`.
    pub fn galois(&self, k: i64) -> Self {
        let m = self.order as i64;
        assert_eq!(
            gcd_u64(k.rem_euclid(m) as u64, self.order),
            1,
            "galois exponent must be a unit"
        );
        let f = field(self.order);
        let mut out = vec![Rational::zero(); f.degree];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &f.powers[(i as i64 * k).rem_euclid(m) as usize];
            for (o, e) in out.iter_mut().zip(row) {
                if !e.is_zero() {
                    *o += c * Rational::from_integer(e.clone());
                }
            }
        }
        CycloNumber {
            order: self.order,
            coeffs: out,
        }
    }

    /// Complex conjugate (`ζ ↦ ζ^{-1}`).
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Multiplicative inverse through the norm: `a^{-1} = (Π_{σ≠1} σ(a)) / N(a)`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(MathError::Domain("inverse of zero in cyclotomic field".into()));
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.order, r.recip()));
        }
        let m = self.order;
        let mut others = Self::one(m);
        for k in 2..m {
            if gcd_u64(k, m) == 1 {
                others = &others * &self.galois(k as i64);
            }
        }
        let norm = (&others * self)
            .as_rational()
            .expect("norm of a cyclotomic element is rational");
        Ok(others.scale(&norm.recip()))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycloNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(self.order);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Value under the embedding `ζ_m ↦ e^{2πi/m}`.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (i, c)| {
                let c = rational_to_f64(c);
                let theta = 2.0 * std::f64::consts::PI * i as f64 / m;
                (re + c * theta.cos(), im + c * theta.sin())
            })
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Gaussian elimination on an augmented matrix with `n` unknowns.
/// Returns `None` if the system is inconsistent.
fn solve_linear(mat: &mut [Vec<Rational>], n: usize) -> Option<Vec<Rational>> {
    let rows = mat.len();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(n);
    for col in 0..n {
        let Some(sel) = (pivot_row..rows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(pivot_row, sel);
        let inv = mat[pivot_row][col].recip();
        for c in col..=n {
            mat[pivot_row][c] = &mat[pivot_row][c] * &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in col..=n {
                    let delta = &factor * &mat[pivot_row][c];
                    mat[r][c] -= delta;
                }
            }
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
    }
    if mat[pivot_row..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); n];
    for (r, c) in pivots {
        sol[c] = mat[r][n].clone();
    }
    Some(sol)
}

fn mul_same_order(a: &CycloNumber, b: &CycloNumber) -> CycloNumber {
    let m = a.order;
    if let Some(r) = a.as_rational() {
        return b.scale(&r);
    }
    if let Some(r) = b.as_rational() {
        return a.scale(&r);
    }
    let f = field(m);
    let d = f.degree;
    let mut raw = vec![Rational::zero(); 2 * d - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if !y.is_zero() {
                raw[i + j] += x * y;
            }
        }
    }
    let mut out: Vec<Rational> = raw[..d].to_vec();
    for (k, c) in raw.iter().enumerate().skip(d) {
        if c.is_zero() {
            continue;
        }
        let row = &f.powers[k % m as usize];
        for (o, e) in out.iter_mut().zip(row) {
            if !e.is_zero() {
                *o += c * Rational::from_integer(e.clone());
            }
        }
    }
    CycloNumber {
        order: m,
        coeffs: out,
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.align(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloNumber {}

impl<'a> Add<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        let (a, b) = self.align(rhs);
        CycloNumber {
            order: a.order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<'a> Sub<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        let (a, b) = self.align(rhs);
        CycloNumber {
            order: a.order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }
}

impl<'a> Mul<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        if self.order == rhs.order {
            return mul_same_order(self, rhs);
        }
        let (a, b) = self.align(rhs);
        mul_same_order(&a, &b)
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = format_rational(c);
            terms.push(match i {
                0 => body,
                1 => format!("{body}*z{}", self.order),
                _ => format!("{body}*z{}^{i}", self.order),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Collects `Σ r_k ζ_m^k` bucketed by exponent and reduces modulo `Φ_m` once.
///
/// Character-weighted sums only ever multiply rationals by roots of unity, so
/// this avoids a full field multiplication per summand.
#[derive(Clone, Debug)]
pub struct CycloAccumulator {
    order: u64,
    buckets: Vec<Rational>,
}

impl CycloAccumulator {
    pub fn new(order: u64) -> Self {
        CycloAccumulator {
            order,
            buckets: vec![Rational::zero(); order as usize],
        }
    }

    /// Adds `r · ζ_m^k`.
    pub fn add(&mut self, k: u64, r: &Rational) {
        self.buckets[(k % self.order) as usize] += r;
    }

    pub fn finish(self) -> CycloNumber {
        let f = field(self.order);
        let mut out = vec![Rational::zero(); f.degree];
        for (k, c) in self.buckets.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(&f.powers[k]) {
                if e.is_one() {
                    *o += c;
                } else if !e.is_zero() {
                    *o += c * Rational::from_integer(e.clone());
                }
            }
        }
        CycloNumber {
            order: self.order,
            coeffs: out,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::rational::{euler_phi, rat};
    use super::*;

    fn z(m: u64) -> CycloNumber {
        CycloNumber::root_of_unity(m, 1)
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |v: Vec<BigInt>| v.into_iter().map(|c| c.to_string()).collect::<Vec<_>>();
        assert_eq!(as_i64(cyclotomic_polynomial(1)), ["-1", "1"]);
        assert_eq!(as_i64(cyclotomic_polynomial(4)), ["1", "0", "1"]);
        assert_eq!(as_i64(cyclotomic_polynomial(6)), ["1", "-1", "1"]);
        assert_eq!(as_i64(cyclotomic_polynomial(12)), ["1", "0", "-1", "0", "1"]);
        for m in 1..60 {
            assert_eq!(cyclotomic_degree(m) as u64, euler_phi(m));
        }
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(&z(4) * &z(4), CycloNumber::from_rational(4, rat(-1, 1)));
        let expected = CycloNumber::from_coeffs(3, vec![rat(-1, 1), rat(-1, 1)]).unwrap();
        assert_eq!(&z(3) * &z(3), expected);
        for m in [3, 4, 5, 8] {
            assert_eq!(z(m).pow(m), CycloNumber::one(m));
            assert_ne!(z(m).pow(m - 1), CycloNumber::one(m));
        }
        assert_eq!(CycloNumber::root_of_unity(2, 1), CycloNumber::from_rational(1, rat(-1, 1)));
    }

    #[test]
    fn mixed_orders_lift_to_lcm() {
        // ζ_4 · ζ_3 = ζ_12^3 · ζ_12^4 = ζ_12^7
        let prod = &z(4) * &z(3);
        assert_eq!(prod.order(), 12);
        assert_eq!(prod, CycloNumber::root_of_unity(12, 7));
        assert_eq!(CycloNumber::root_of_unity(6, 3), CycloNumber::from_rational(1, rat(-1, 1)));
    }

    #[test]
    fn lift_and_lower() {
        let a = CycloNumber::from_coeffs(5, vec![rat(1, 2), rat(-3, 1), rat(0, 1), rat(7, 3)]).unwrap();
        let lifted = a.lift(15).unwrap();
        assert_eq!(lifted.lower(5).unwrap(), a);
        assert!(z(15).lower(5).is_none());
        assert!(a.lift(7).is_err());
    }

    #[test]
    fn inverse_and_conjugate() {
        let a = &CycloNumber::from_rational(8, rat(2, 1)) + &z(8);
        let inv = a.inv().unwrap();
        assert_eq!(&a * &inv, CycloNumber::one(8));
        assert_eq!(&z(5) * &z(5).conj(), CycloNumber::one(5));
        assert!(CycloNumber::zero(3).inv().is_err());
    }

    #[test]
    fn accumulator_matches_direct_sum() {
        let mut acc = CycloAccumulator::new(6);
        let mut direct = CycloNumber::zero(6);
        for k in 0..9u64 {
            let r = rat(k as i64 + 1, 3);
            acc.add(k, &r);
            direct = &direct + &CycloNumber::root_of_unity(6, k as i64).scale(&r);
        }
        assert_eq!(acc.finish(), direct);
    }

    #[test]
    fn complex_embedding() {
        let (re, im) = z(4).to_complex();
        assert!(re.abs() < 1e-15 && (im - 1.0).abs() < 1e-15);
        let (re, _) = (&z(5) + &z(5).conj()).to_complex();
        assert!((re - 2.0 * (2.0 * std::f64::consts::PI / 5.0).cos()).abs() < 1e-14);
    }
}
