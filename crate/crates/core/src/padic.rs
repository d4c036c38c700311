//! Finite-precision p-adic numbers with tracked absolute precision.
//!
//! A nonzero value is `u·p^v + O(p^{v+N})` with `u` a unit in `[0, p^N)`; `N` is the
//! relative precision and `v + N` the absolute one. A value with no known unit
//! digit is `O(p^k)`. Exact zero is kept apart and has infinite precision.
//!
//! Every result is the canonical reduction of the exact result on representatives,
//! modulo the guaranteed absolute precision. That precision is the min of the
//! operands' for `+`/`-` and `v_total + min(N_a, N_b)` for `·`/`÷`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::rational::{bigint_pow, binomial_signed, int_valuation, rat_valuation, Rational};
use crate::error::{MathError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Zero,
    /// `unit·p^val` known mod `p^{val+rel}`; `unit = 0` iff `rel = 0`.
    Approx { unit: BigInt, val: i64, rel: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PAdicNumber {
    p: u64,
    kind: Kind,
}

fn p_pow(p: u64, e: i64) -> BigInt {
    debug_assert!(e >= 0);
    bigint_pow(p, e as u64)
}

impl PAdicNumber {
    pub fn zero(p: u64) -> Self {
        PAdicNumber { p, kind: Kind::Zero }
    }

    /// `O(p^k)`: a value only known to be divisible by `p^k`.
    pub fn big_oh(p: u64, k: i64) -> Self {
        PAdicNumber {
            p,
            kind: Kind::Approx {
                unit: BigInt::zero(),
                val: k,
                rel: 0,
            },
        }
    }

    /// The value `x·p^v` known modulo `p^abs`.
    pub fn from_residue(p: u64, x: BigInt, v: i64, abs: i64) -> Self {
        if abs <= v {
            return Self::big_oh(p, abs);
        }
        let m = abs - v;
        let x = x.mod_floor(&p_pow(p, m));
        if x.is_zero() {
            return Self::big_oh(p, abs);
        }
        let e = int_valuation(&x, p) as i64;
        let unit = x / p_pow(p, e);
        PAdicNumber {
            p,
            kind: Kind::Approx {
                unit,
                val: v + e,
                rel: (m - e) as u32,
            },
        }
    }

    /// `x` to relative precision `n`.
    pub fn from_rational(x: &Rational, p: u64, n: u32) -> Self {
        match rat_valuation(x, p) {
            None => Self::zero(p),
            Some(v) => Self::from_rational_abs(x, p, v + n as i64),
        }
    }

    /// `x` to absolute precision `abs`; zero stays exact.
    pub fn from_rational_abs(x: &Rational, p: u64, abs: i64) -> Self {
        let Some(v) = rat_valuation(x, p) else {
            return Self::zero(p);
        };
        if abs <= v {
            return Self::big_oh(p, abs);
        }
        let m = abs - v;
        let modulus = p_pow(p, m);
        let num = x.numer() / p_pow(p, v.max(0));
        let den = x.denom() / p_pow(p, (-v).max(0));
        let den_inv = den
            .mod_floor(&modulus)
            .modinv(&modulus)
            .expect("denominator is a unit");
        Self::from_residue(p, num * den_inv, v, abs)
    }

    pub fn from_integer<T: Into<BigInt>>(c: T, p: u64, n: u32) -> Self {
        Self::from_rational(&Rational::from_integer(c.into()), p, n)
    }

    pub fn one(p: u64, n: u32) -> Self {
        Self::from_integer(1, p, n)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.kind, Kind::Zero)
    }

    /// True for exact zero and for `O(p^k)`.
    pub fn is_indistinguishable_from_zero(&self) -> bool {
        match &self.kind {
            Kind::Zero => true,
            Kind::Approx { rel, .. } => *rel == 0,
        }
    }

    /// Exact valuation, when a nonzero digit is known.
    pub fn valuation(&self) -> Option<i64> {
        match &self.kind {
            Kind::Approx { val, rel, .. } if *rel > 0 => Some(*val),
            _ => None,
        }
    }

    /// Lower bound on the valuation; `None` means infinite (exact zero).
    pub fn valuation_lower_bound(&self) -> Option<i64> {
        match &self.kind {
            Kind::Zero => None,
            Kind::Approx { val, .. } => Some(*val),
        }
    }

    /// Guaranteed absolute precision; `None` means exact (zero).
    pub fn abs_precision(&self) -> Option<i64> {
        match &self.kind {
            Kind::Zero => None,
            Kind::Approx { val, rel, .. } => Some(val + *rel as i64),
        }
    }

    pub fn rel_precision(&self) -> Option<u32> {
        match &self.kind {
            Kind::Zero => None,
            Kind::Approx { rel, .. } => Some(*rel),
        }
    }

    /// The unit digit block `u` (0 for exact zero and `O(p^k)`).
    pub fn unit(&self) -> BigInt {
        match &self.kind {
            Kind::Zero => BigInt::zero(),
            Kind::Approx { unit, .. } => unit.clone(),
        }
    }

    /// The canonical representative `u·p^v` as a rational.
    pub fn representative(&self) -> Rational {
        match &self.kind {
            Kind::Approx { unit, val, rel } if *rel > 0 => {
                let u = Rational::from_integer(unit.clone());
                if *val >= 0 {
                    u * Rational::from_integer(p_pow(self.p, *val))
                } else {
                    u / Rational::from_integer(p_pow(self.p, -*val))
                }
            }
            _ => Rational::zero(),
        }
    }

    /// `(x, v, abs)` with value `x·p^v` known mod `p^abs`; `abs = i64::MAX` for exact zero.
    fn parts(&self) -> (BigInt, i64, i64) {
        match &self.kind {
            Kind::Zero => (BigInt::zero(), i64::MAX, i64::MAX),
            Kind::Approx { unit, val, rel } => (unit.clone(), *val, val + *rel as i64),
        }
    }

    fn same_prime(&self, rhs: &Self) {
        assert_eq!(self.p, rhs.p, "mixing p-adic numbers for different primes");
    }

    /// Lowers the absolute precision to at most `abs`.
    pub fn truncate(&self, abs: i64) -> Self {
        match &self.kind {
            Kind::Zero => Self::big_oh(self.p, abs),
            Kind::Approx { unit, val, rel } => {
                let cur = val + *rel as i64;
                if cur <= abs {
                    self.clone()
                } else {
                    Self::from_residue(self.p, unit.clone(), *val, abs)
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        match &self.kind {
            Kind::Zero => self.clone(),
            Kind::Approx { unit, val, rel } => {
                Self::from_residue(self.p, -unit, *val, val + *rel as i64)
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.same_prime(rhs);
        if self.is_exact_zero() {
            return rhs.clone();
        }
        if rhs.is_exact_zero() {
            return self.clone();
        }
        let (xa, va, aa) = self.parts();
        let (xb, vb, ab) = rhs.parts();
        let vm = va.min(vb);
        let x = xa * p_pow(self.p, va - vm) + xb * p_pow(self.p, vb - vm);
        Self::from_residue(self.p, x, vm, aa.min(ab))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.same_prime(rhs);
        match (&self.kind, &rhs.kind) {
            (Kind::Zero, _) | (_, Kind::Zero) => Self::zero(self.p),
            (
                Kind::Approx { unit: ua, val: va, rel: ra },
                Kind::Approx { unit: ub, val: vb, rel: rb },
            ) => {
                let v = va + vb;
                Self::from_residue(self.p, ua * ub, v, v + (*ra).min(*rb) as i64)
            }
        }
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.same_prime(rhs);
        let (ub, vb, rb) = match &rhs.kind {
            Kind::Approx { unit, val, rel } if *rel > 0 => (unit, *val, *rel),
            _ => return Err(MathError::Domain("p-adic division by zero".into())),
        };
        match &self.kind {
            Kind::Zero => Ok(Self::zero(self.p)),
            Kind::Approx { unit: ua, val: va, rel: ra } => {
                let m = (*ra).min(rb);
                let v = va - vb;
                if m == 0 {
                    return Ok(Self::big_oh(self.p, v));
                }
                let modulus = p_pow(self.p, m as i64);
                let inv = ub.modinv(&modulus).expect("unit");
                Ok(Self::from_residue(self.p, ua * inv, v, v + m as i64))
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let rel = self
            .rel_precision()
            .filter(|&r| r > 0)
            .ok_or_else(|| MathError::Domain("p-adic inverse of zero".into()))?;
        Self::one(self.p, rel).div(self)
    }

    /// Exact multiplication by an integer; relative precision is unchanged.
    pub fn mul_integer(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.p);
        }
        match &self.kind {
            Kind::Zero => self.clone(),
            Kind::Approx { unit, val, rel } => {
                let e = int_valuation(c, self.p) as i64;
                let c_unit = c / p_pow(self.p, e);
                Self::from_residue(self.p, unit * c_unit, val + e, val + e + *rel as i64)
            }
        }
    }

    /// Exact division by a nonzero integer; relative precision is unchanged.
    pub fn div_integer(&self, c: &BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(MathError::Domain("division by the integer 0".into()));
        }
        match &self.kind {
            Kind::Zero => Ok(self.clone()),
            Kind::Approx { unit, val, rel } => {
                let e = int_valuation(c, self.p) as i64;
                let v = val - e;
                if *rel == 0 {
                    return Ok(Self::big_oh(self.p, v));
                }
                let modulus = p_pow(self.p, *rel as i64);
                let c_unit = (c / p_pow(self.p, e)).mod_floor(&modulus);
                let inv = c_unit.modinv(&modulus).expect("unit");
                Ok(Self::from_residue(self.p, unit * inv, v, v + *rel as i64))
            }
        }
    }

    /// Exact multiplication by a rational.
    pub fn mul_rational(&self, x: &Rational) -> Result<Self> {
        self.mul_integer(x.numer()).div_integer(x.denom())
    }

    /// Integer power by binary powering of the unit; negative exponents invert first.
    pub fn pow_int(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow_int(-e);
        }
        match &self.kind {
            Kind::Zero if e == 0 => Err(MathError::Domain("0^0 is undefined here".into())),
            Kind::Zero => Ok(self.clone()),
            Kind::Approx { unit, val, rel } => {
                if e == 0 {
                    if *rel == 0 {
                        return Err(MathError::Domain("power of an indeterminate value".into()));
                    }
                    return Ok(Self::one(self.p, *rel));
                }
                let v = val * e;
                if *rel == 0 {
                    return Ok(Self::big_oh(self.p, v));
                }
                let modulus = p_pow(self.p, *rel as i64);
                let u = unit.modpow(&BigInt::from(e), &modulus);
                Ok(Self::from_residue(self.p, u, v, v + *rel as i64))
            }
        }
    }

    /// Valuation of the difference of canonical representatives; `None` if they coincide.
    pub fn diff_valuation(&self, rhs: &Self) -> Option<i64> {
        rat_valuation(&(self.representative() - rhs.representative()), self.p)
    }

    /// True when `self ≡ rhs mod p^k` on representatives.
    pub fn congruent(&self, rhs: &Self, k: i64) -> bool {
        self.diff_valuation(rhs).map_or(true, |d| d >= k)
    }

    /// Parses the text produced by `Display`, given the prime.
    pub fn parse(s: &str, p: u64) -> Result<Self> {
        let bad = || MathError::Parse(format!("not a p-adic number: {s:?}"));
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero(p));
        }
        let parse_big_oh = |t: &str| -> Result<i64> {
            let inner = t.strip_prefix("O(").and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
            parse_power(inner, p).ok_or_else(bad)
        };
        match s.split_once(" + ") {
            None => Ok(Self::big_oh(p, parse_big_oh(s)?)),
            Some((head, tail)) => {
                let abs = parse_big_oh(tail)?;
                let (u, pw) = head.split_once(" * ").ok_or_else(bad)?;
                let unit: BigInt = u.parse().map_err(|_| bad())?;
                let v = parse_power(pw, p).ok_or_else(bad)?;
                if unit.is_negative() || unit.is_zero() || int_valuation(&unit, p) != 0 || abs <= v {
                    return Err(bad());
                }
                let out = Self::from_residue(p, unit.clone(), v, abs);
                if out.unit() != unit {
                    return Err(bad());
                }
                Ok(out)
            }
        }
    }
}

fn parse_power(t: &str, p: u64) -> Option<i64> {
    let (base, exp) = t.split_once('^')?;
    if base.parse::<u64>().ok()? != p {
        return None;
    }
    exp.parse().ok()
}

impl fmt::Display for PAdicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Zero => write!(f, "0"),
            Kind::Approx { val, rel: 0, .. } => write!(f, "O({}^{})", self.p, val),
            Kind::Approx { unit, val, rel } => {
                write!(f, "{} * {}^{} + O({}^{})", unit, self.p, val, self.p, val + *rel as i64)
            }
        }
    }
}

/// An exponent or binomial argument: an integer (exact routes) or a p-adic value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PAdicArg {
    Integer(i64),
    Value(PAdicNumber),
}

impl PAdicArg {
    pub fn to_padic(&self, p: u64, n: u32) -> PAdicNumber {
        match self {
            PAdicArg::Integer(k) => PAdicNumber::from_integer(*k, p, n),
            PAdicArg::Value(x) => x.clone(),
        }
    }
}

/// `q = p` for odd `p` and `q = 4` for `p = 2`; `v_p(q)`.
pub fn q_valuation(p: u64) -> i64 {
    if p == 2 {
        2
    } else {
        1
    }
}

fn check_unit(a: i64, p: u64) -> Result<()> {
    if a.rem_euclid(p as i64) == 0 {
        return Err(MathError::Domain(format!("{a} is not a unit at p={p}")));
    }
    Ok(())
}

/// The root of unity `ω(a)` congruent to `a` mod `q`, to precision `p^N`.
pub fn teichmuller(a: i64, p: u64, n: u32) -> Result<PAdicNumber> {
    check_unit(a, p)?;
    if p == 2 {
        let sign = if a.rem_euclid(4) == 1 { 1 } else { -1 };
        return Ok(PAdicNumber::from_integer(sign, p, n));
    }
    let modulus = p_pow(p, n as i64);
    let pb = BigInt::from(p);
    let mut x = BigInt::from(a).mod_floor(&modulus);
    loop {
        let next = x.modpow(&pb, &modulus);
        if next == x {
            break;
        }
        x = next;
    }
    Ok(PAdicNumber::from_residue(p, x, 0, n as i64))
}

/// `⟨a⟩ = a / ω(a)`, a principal unit.
pub fn angle_bracket(a: i64, p: u64, n: u32) -> Result<PAdicNumber> {
    let w = teichmuller(a, p, n)?;
    PAdicNumber::from_integer(a, p, n).div(&w)
}

/// `log x = Σ_{k≥1} (-1)^{k+1} (x-1)^k / k` for `x ≡ 1 mod q`.
pub fn padic_log(x: &PAdicNumber) -> Result<PAdicNumber> {
    let p = x.prime();
    let target = x
        .abs_precision()
        .ok_or_else(|| MathError::Domain("log of zero".into()))?;
    let y = x.sub(&PAdicNumber::one(p, (target.max(1)) as u32));
    let vq = q_valuation(p);
    let v = match y.valuation_lower_bound() {
        Some(v) if v >= vq => v,
        Some(_) if y.is_indistinguishable_from_zero() => {
            return Err(MathError::Domain("log argument not known to be ≡ 1 mod q".into()))
        }
        Some(_) => return Err(MathError::Domain("log argument not ≡ 1 mod q".into())),
        None => return Ok(PAdicNumber::zero(p)),
    };
    if y.is_indistinguishable_from_zero() {
        return Ok(PAdicNumber::big_oh(p, target));
    }
    let mut acc = PAdicNumber::zero(p);
    let mut power = y.clone();
    let mut k: u64 = 1;
    // term k has valuation ≥ k·v - floor(log_p k), increasing in k
    while (k as i64) * v - floor_log(k, p) < target {
        let term = power.div_integer(&BigInt::from(k))?;
        acc = if k % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        power = power.mul(&y);
        k += 1;
    }
    Ok(acc.truncate(target))
}

fn floor_log(k: u64, p: u64) -> i64 {
    let mut e = 0;
    let mut x = k;
    while x >= p {
        x /= p;
        e += 1;
    }
    e
}

/// `exp y = Σ y^k / k!` for `v_p(y) ≥ 1` (`≥ 2` when `p = 2`).
pub fn padic_exp(y: &PAdicNumber) -> Result<PAdicNumber> {
    let p = y.prime();
    let vq = q_valuation(p);
    let target = match y.abs_precision() {
        None => return Err(MathError::Domain("exp of exact zero has no precision".into())),
        Some(t) => t,
    };
    let v = y.valuation_lower_bound().expect("not exact zero");
    if v < vq {
        return Err(MathError::Domain(format!("exp argument has valuation {v} < {vq}")));
    }
    let one = PAdicNumber::one(p, target.max(1) as u32);
    if y.is_indistinguishable_from_zero() {
        return Ok(one.truncate(target));
    }
    let mut acc = one;
    let mut term = y.clone();
    let mut k: u64 = 1;
    // v_p(k!) ≤ (k-1)/(p-1), so term k has valuation ≥ k·v - floor((k-1)/(p-1))
    while (k as i64) * v - (((k - 1) / (p - 1)) as i64) < target {
        acc = acc.add(&term);
        k += 1;
        term = term.mul(y).div_integer(&BigInt::from(k))?;
    }
    Ok(acc.truncate(target))
}

/// `b^s` for `b ≡ 1 mod q` and `|s|_p ≤ 1`.
pub fn padic_pow(b: &PAdicNumber, s: &PAdicArg) -> Result<PAdicNumber> {
    let p = b.prime();
    let one_off = b.sub(&PAdicNumber::one(p, b.rel_precision().unwrap_or(1).max(1)));
    if one_off.valuation_lower_bound().is_some_and(|v| v < q_valuation(p)) {
        return Err(MathError::Domain("base is not ≡ 1 mod q".into()));
    }
    match s {
        PAdicArg::Integer(e) => b.pow_int(*e),
        PAdicArg::Value(s) => {
            if s.is_exact_zero() {
                return b.pow_int(0);
            }
            if s.valuation_lower_bound().is_some_and(|v| v < 0) {
                return Err(MathError::Domain("exponent must satisfy |s|_p ≤ 1".into()));
            }
            padic_exp(&s.mul(&padic_log(b)?))
        }
    }
}

/// `C(x, m) = x(x-1)⋯(x-m+1)/m!`; exact for integer `x`, tracked otherwise.
pub fn padic_binomial(x: &PAdicArg, m: u64, p: u64, n: u32) -> Result<PAdicNumber> {
    match x {
        PAdicArg::Integer(k) => Ok(PAdicNumber::from_rational(
            &Rational::from_integer(binomial_signed(&BigInt::from(*k), m)),
            p,
            n,
        )),
        PAdicArg::Value(x) => {
            let prec = x.abs_precision().unwrap_or(n as i64).max(1) as u32;
            let mut acc = PAdicNumber::one(p, prec);
            for j in 0..m {
                acc = acc.mul(&x.sub(&PAdicNumber::from_integer(j, p, prec)));
            }
            acc.div_integer(&crate::arith::rational::factorial(m))
        }
    }
}

impl std::ops::Add for &PAdicNumber {
    type Output = PAdicNumber;
    fn add(self, rhs: Self) -> PAdicNumber {
        PAdicNumber::add(self, rhs)
    }
}

impl std::ops::Sub for &PAdicNumber {
    type Output = PAdicNumber;
    fn sub(self, rhs: Self) -> PAdicNumber {
        PAdicNumber::sub(self, rhs)
    }
}

impl std::ops::Mul for &PAdicNumber {
    type Output = PAdicNumber;
    fn mul(self, rhs: Self) -> PAdicNumber {
        PAdicNumber::mul(self, rhs)
    }
}

impl std::ops::Neg for &PAdicNumber {
    type Output = PAdicNumber;
    fn neg(self) -> PAdicNumber {
        PAdicNumber::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{binomial, rat};

    fn pa(x: i64, p: u64, n: u32) -> PAdicNumber {
        PAdicNumber::from_integer(x, p, n)
    }

    #[test]
    fn from_rational_examples() {
        let a = PAdicNumber::from_rational(&rat(1, 5), 5, 4);
        assert_eq!((a.valuation(), a.unit()), (Some(-1), BigInt::from(1)));
        let b = pa(7, 5, 2);
        assert_eq!((b.valuation(), b.unit()), (Some(0), BigInt::from(7)));
        let c = pa(-1, 5, 3);
        assert_eq!((c.valuation(), c.unit()), (Some(0), BigInt::from(124)));
        assert!(PAdicNumber::from_rational(&rat(0, 1), 5, 3).is_exact_zero());
        let d = PAdicNumber::from_rational(&rat(50, 3), 5, 3);
        assert_eq!(d.valuation(), Some(2));
        assert_eq!(d.abs_precision(), Some(5));
        assert_eq!(d.mul_integer(&BigInt::from(3)).unit(), BigInt::from(2));
    }

    #[test]
    fn precision_rules() {
        let a = pa(1, 5, 3); // abs 3
        let b = PAdicNumber::from_rational(&rat(1, 5), 5, 10); // abs 9
        assert_eq!(a.add(&b).abs_precision(), Some(3));
        assert_eq!(a.mul(&b).abs_precision(), Some(2));
        // cancellation keeps the absolute precision and lowers the relative one
        let c = pa(26, 5, 3);
        let d = c.sub(&a);
        assert_eq!((d.valuation(), d.abs_precision(), d.rel_precision()), (Some(2), Some(3), Some(1)));
        let e = c.sub(&c);
        assert!(e.is_indistinguishable_from_zero());
        assert_eq!(e.to_string(), "O(5^3)");
        assert_eq!(a.add(&PAdicNumber::zero(5)), a);
        assert!(a.div(&e).is_err());
        assert!(a.mul(&PAdicNumber::zero(5)).is_exact_zero());
    }

    #[test]
    fn display_round_trip() {
        for x in [
            pa(-1, 5, 3),
            PAdicNumber::from_rational(&rat(3, 25), 5, 6),
            PAdicNumber::from_rational(&rat(-7, 2), 7, 4),
            PAdicNumber::big_oh(5, 4),
            PAdicNumber::zero(3),
        ] {
            let s = x.to_string();
            assert_eq!(PAdicNumber::parse(&s, x.prime()).unwrap(), x, "{s}");
        }
        assert_eq!(pa(-1, 5, 3).to_string(), "124 * 5^0 + O(5^3)");
        assert!(PAdicNumber::parse("5 * 5^0 + O(5^3)", 5).is_err());
        assert!(PAdicNumber::parse("1 * 7^0 + O(7^3)", 5).is_err());
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(1, 5, 6).unwrap(), pa(1, 5, 6));
        assert_eq!(teichmuller(4, 5, 6).unwrap().unit(), BigInt::from(5i64.pow(6) - 1));
        let w = teichmuller(2, 5, 3).unwrap();
        assert_eq!(w.pow_int(4).unwrap(), pa(1, 5, 3));
        assert_eq!(w.unit().mod_floor(&BigInt::from(5)), BigInt::from(2));
        assert!(teichmuller(10, 5, 3).is_err());
        for p in [3u64, 5, 7] {
            for a in 1..(p * p) as i64 {
                if a % p as i64 == 0 {
                    continue;
                }
                let w = teichmuller(a, p, 12).unwrap();
                assert_eq!(w.pow_int(p as i64 - 1).unwrap(), pa(1, p, 12));
                assert!(w.congruent(&pa(a, p, 12), 1));
                let ab = angle_bracket(a, p, 12).unwrap();
                assert!(ab.sub(&pa(1, p, 12)).valuation_lower_bound().unwrap() >= 1);
            }
        }
        assert_eq!(teichmuller(3, 2, 8).unwrap(), pa(-1, 2, 8));
        assert_eq!(teichmuller(5, 2, 8).unwrap(), pa(1, 2, 8));
        let ab = angle_bracket(7, 5, 4).unwrap();
        assert_eq!(ab.mul(&teichmuller(7, 5, 4).unwrap()), pa(7, 5, 4));
    }

    #[test]
    fn log_exp_identities() {
        for p in [2u64, 3, 5, 7] {
            let n = 16;
            let q = if p == 2 { 4 } else { p as i64 };
            let b = pa(1 + q, p, n);
            let l = padic_log(&b).unwrap();
            assert!(padic_exp(&l).unwrap().congruent(&b, n as i64 - 2));
            let l2 = padic_log(&b.mul(&b)).unwrap();
            assert!(l2.congruent(&l.mul_integer(&BigInt::from(2)), n as i64 - 2));
            assert!(padic_log(&pa(1, p, n)).unwrap().is_indistinguishable_from_zero());
        }
        assert!(padic_log(&pa(2, 5, 8)).is_err());
        assert!(padic_exp(&pa(1, 5, 8)).is_err());
        assert!(padic_exp(&pa(2, 2, 8)).is_err());
    }

    #[test]
    fn pow_routes_agree() {
        let p = 5;
        let n = 14;
        let b = pa(6, p, n);
        assert_eq!(padic_pow(&b, &PAdicArg::Integer(0)).unwrap(), pa(1, p, n));
        let via_int = padic_pow(&b, &PAdicArg::Integer(3)).unwrap();
        let via_value = padic_pow(&b, &PAdicArg::Value(pa(3, p, n))).unwrap();
        assert_eq!(via_int, b.mul(&b).mul(&b));
        assert!(via_int.congruent(&via_value, n as i64 - 2));
        // (1+p)^p by the binomial theorem
        let expect: BigInt = (0..=p).map(|k| binomial(p, k) * BigInt::from(p).pow(k as u32)).sum();
        let got = padic_pow(&b, &PAdicArg::Value(pa(p as i64, p, n))).unwrap();
        assert!(got.congruent(&PAdicNumber::from_integer(expect, p, n), n as i64 - 2));
        assert!(padic_pow(&pa(2, p, n), &PAdicArg::Integer(2)).is_err());
    }

    #[test]
    fn binomial_examples() {
        let p = 5;
        assert_eq!(padic_binomial(&PAdicArg::Integer(7), 0, p, 8).unwrap(), pa(1, p, 8));
        for n in 0..10i64 {
            for m in 0..=n as u64 {
                assert_eq!(
                    padic_binomial(&PAdicArg::Integer(n), m, p, 8).unwrap(),
                    PAdicNumber::from_integer(binomial(n as u64, m), p, 8)
                );
                let tracked = padic_binomial(&PAdicArg::Value(pa(n, p, 8)), m, p, 8).unwrap();
                assert!(tracked.congruent(&PAdicNumber::from_integer(binomial(n as u64, m), p, 8), 8 - 2));
            }
            assert!(padic_binomial(&PAdicArg::Integer(n), n as u64 + 1, p, 8).unwrap().is_exact_zero());
        }
        // division by m! costs v_p(m!) digits of absolute precision
        let x = PAdicNumber::from_rational(&rat(1, 3), p, 8);
        let c = padic_binomial(&PAdicArg::Value(x), 5, p, 8).unwrap();
        assert_eq!(c.abs_precision(), Some(7));
    }
}
