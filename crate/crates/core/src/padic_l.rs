//! The Kubota–Leopoldt `L_p(s, χ)` and the multivariate `L_{p,r}(s, χ)`, their
//! Bernoulli-side counterparts with the Euler factor at `p` removed, and the
//! interpolation check at negative integers.
//!
//! Both p-adic functions sum over `a ∈ [1, F]^r` with `p ∤ Σa_i`:
//!
//! `L_{p,r}(s, χ) = 1/∏_{j=1..r}(s - j) · F^{-r} · Σ χ(σ) ⟨σ⟩^{r-s} Σ_m C(r-s, m) (F/σ)^m B^{(r)}_m`
//!
//! with `σ = Σa_i`. Character values are mapped into `Q_p` by sending `ζ_{φ(q)}`
//! to the Teichmüller lift of the generator fixed by [`teichmuller_generator`].

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::rational::{gcd_u64, lcm_u64, rat_int, rat_pow, Rational};
use crate::arith::{CycloAccumulator, CycloNumber};
use crate::bernoulli::{multi_bernoulli, multi_bernoulli_poly_coeffs, eval_poly};
use crate::characters::{teichmuller_generator, teichmuller_modulus, twist, DirichletCharacter};
use crate::classical::{box_composition_counts, gen_multi_bernoulli, special_value_factor};
use crate::error::{MathError, Result};
use crate::padic::{angle_bracket, padic_binomial, padic_pow, teichmuller, PAdicArg, PAdicNumber};
use crate::report::Comparison;

/// Images of `ζ_m^k`, `0 ≤ k < m`, in `Q_p` to relative precision `n`.
#[derive(Clone, Debug)]
pub struct Embedding {
    p: u64,
    order: u64,
    roots: Vec<PAdicNumber>,
}

impl Embedding {
    pub fn new(order: u64, p: u64, n: u32) -> Result<Self> {
        check_prime(p)?;
        let group = teichmuller_modulus(p) - teichmuller_modulus(p) / p;
        if group % order != 0 {
            return Err(MathError::UnsupportedCharacter { order, p });
        }
        let g = teichmuller(teichmuller_generator(p) as i64, p, n)?;
        let zeta = g.pow_int((group / order) as i64)?;
        let mut roots = Vec::with_capacity(order as usize);
        let mut cur = PAdicNumber::one(p, n);
        for _ in 0..order {
            roots.push(cur.clone());
            cur = cur.mul(&zeta);
        }
        Ok(Embedding { p, order, roots })
    }

    pub fn for_character(chi: &DirichletCharacter, p: u64, n: u32) -> Result<Self> {
        Self::new(chi.order(), p, n)
    }

    /// `ι(χ(x))`, or `None` when `χ(x) = 0`.
    pub fn character_value(&self, chi: &DirichletCharacter, x: i64) -> Option<PAdicNumber> {
        debug_assert_eq!(chi.order(), self.order);
        chi.exponent(x).map(|k| self.roots[k as usize].clone())
    }

    pub fn root(&self, k: i64) -> &PAdicNumber {
        &self.roots[k.rem_euclid(self.order as i64) as usize]
    }

    /// Image of a cyclotomic number of this embedding's order.
    pub fn cyclo(&self, x: &CycloNumber, n: u32) -> Result<PAdicNumber> {
        let x = x.lift(self.order)?;
        let mut acc = PAdicNumber::zero(self.p);
        for (j, c) in x.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&PAdicNumber::from_rational(c, self.p, n).mul(self.root(j as i64)));
            }
        }
        Ok(acc)
    }
}

/// Maps a cyclotomic number into `Q_p`, lowering its field first when possible.
pub fn embed_cyclo(x: &CycloNumber, p: u64, n: u32) -> Result<PAdicNumber> {
    check_prime(p)?;
    let group = teichmuller_modulus(p) - teichmuller_modulus(p) / p;
    let target = gcd_u64(x.order(), group);
    let lowered = x.lower(target).ok_or(MathError::UnsupportedCharacter {
        order: x.order(),
        p,
    })?;
    Embedding::new(target, p, n)?.cyclo(&lowered, n)
}

fn check_prime(p: u64) -> Result<()> {
    if !crate::arith::rational::is_prime(p) {
        return Err(MathError::InvalidPrime(p));
    }
    Ok(())
}

/// `lcm(q, f_χ)`.
pub fn default_modulus(chi: &DirichletCharacter, p: u64) -> u64 {
    lcm_u64(teichmuller_modulus(p), chi.modulus())
}

fn check_modulus(chi: &DirichletCharacter, p: u64, big_f: u64) -> Result<()> {
    let q = teichmuller_modulus(p);
    if big_f == 0 || big_f % q != 0 || big_f % chi.modulus() != 0 {
        return Err(MathError::Domain(format!(
            "F={big_f} must be a multiple of q={q} and f={}",
            chi.modulus()
        )));
    }
    Ok(())
}

/// `Σ_m C(x, m) (F/σ)^m B^{(r)}_m` to absolute precision `n`.
///
/// Terms satisfy `v_p ≥ m·v_p(F) - r` because `C(x, m) ∈ Z_p` and
/// `v_p(B^{(r)}_m) ≥ -r`; the series is cut where that bound reaches `n`.
fn inner_series(x: &PAdicArg, sigma: u64, big_f: u64, r: u32, p: u64, n: u32) -> Result<PAdicNumber> {
    let ratio = Rational::new(BigInt::from(big_f), BigInt::from(sigma));
    let vf = crate::arith::rational::v_p_u64(big_f, p) as i64;
    debug_assert!(vf >= 1);
    let target = n as i64;
    let last = ((target + r as i64 + vf - 1) / vf - 1).max(0) as u32;
    let coeff = |m: u32| -> Result<Rational> { Ok(rat_pow(&ratio, m as i64) * multi_bernoulli(m, r)?) };
    match x {
        PAdicArg::Integer(k) if *k >= 0 => {
            let mut sum = Rational::zero();
            for m in 0..=*k as u32 {
                sum += Rational::from_integer(crate::arith::rational::binomial(*k as u64, m as u64)) * coeff(m)?;
            }
            Ok(PAdicNumber::from_rational(&sum, p, n))
        }
        PAdicArg::Integer(k) => {
            let kb = BigInt::from(*k);
            let mut sum = Rational::zero();
            for m in 0..=last {
                sum += Rational::from_integer(crate::arith::rational::binomial_signed(&kb, m as u64))
                    * coeff(m)?;
            }
            Ok(PAdicNumber::from_rational_abs(&sum, p, target))
        }
        PAdicArg::Value(_) => {
            let mut acc = PAdicNumber::zero(p);
            for m in 0..=last {
                let c = coeff(m)?;
                if c.is_zero() {
                    continue;
                }
                let b = padic_binomial(x, m as u64, p, n)?;
                acc = acc.add(&b.mul(&PAdicNumber::from_rational(&c, p, n)));
            }
            Ok(acc.truncate(target))
        }
    }
}

/// `r - s` as an exponent/binomial argument.
fn shifted_argument(s: &PAdicArg, r: u32, p: u64, n: u32) -> PAdicArg {
    match s {
        PAdicArg::Integer(k) => PAdicArg::Integer(r as i64 - k),
        PAdicArg::Value(v) => PAdicArg::Value(PAdicNumber::from_integer(r, p, n).sub(v)),
    }
}

/// Multiplies by `1/∏_{j=1..r}(s - j)`, exactly for integer `s`.
fn apply_prefactor(total: &PAdicNumber, s: &PAdicArg, r: u32, p: u64, n: u32) -> Result<PAdicNumber> {
    match s {
        PAdicArg::Integer(k) => {
            if (1..=r as i64).contains(k) {
                return Err(MathError::Pole(*k));
            }
            let prod: BigInt = (1..=r as i64).map(|j| BigInt::from(k - j)).product();
            total.mul_rational(&Rational::new(BigInt::one(), prod))
        }
        PAdicArg::Value(v) => {
            if v.valuation_lower_bound().is_some_and(|e| e < 0) {
                return Err(MathError::Domain("evaluation point must satisfy |s|_p ≤ 1".into()));
            }
            let mut prod = PAdicNumber::one(p, n);
            for j in 1..=r as i64 {
                let d = v.sub(&PAdicNumber::from_integer(j, p, n));
                if d.is_indistinguishable_from_zero() {
                    return Err(MathError::Pole(j));
                }
                prod = prod.mul(&d);
            }
            total.div(&prod)
        }
    }
}

fn check_point(s: &PAdicArg, r: u32, p: u64) -> Result<()> {
    match s {
        PAdicArg::Integer(k) if (1..=r as i64).contains(k) => Err(MathError::Pole(*k)),
        PAdicArg::Value(v) if v.prime() != p => {
            Err(MathError::Domain("evaluation point uses a different prime".into()))
        }
        _ => Ok(()),
    }
}

/// `χ(σ) ⟨σ⟩^{r-s} Σ_m C(r-s, m)(F/σ)^m B^{(r)}_m`, or `None` when `χ(σ) = 0`.
#[allow(clippy::too_many_arguments)]
fn summand(
    chi: &DirichletCharacter,
    emb: &Embedding,
    x: &PAdicArg,
    sigma: u64,
    big_f: u64,
    r: u32,
    p: u64,
    n: u32,
) -> Result<Option<PAdicNumber>> {
    let Some(c) = emb.character_value(chi, sigma as i64) else {
        return Ok(None);
    };
    let bracket = padic_pow(&angle_bracket(sigma as i64, p, n)?, x)?;
    let inner = inner_series(x, sigma, big_f, r, p, n)?;
    Ok(Some(c.mul(&bracket).mul(&inner)))
}

/// Kubota–Leopoldt `L_p(s, χ)` as a one-variable sum over `a ∈ [1, F]`, `p ∤ a`.
#[allow(non_snake_case)]
pub fn washington_Lp(
    s: &PAdicArg,
    chi: &DirichletCharacter,
    p: u64,
    n: u32,
    big_f: Option<u64>,
) -> Result<PAdicNumber> {
    check_prime(p)?;
    let big_f = big_f.unwrap_or_else(|| default_modulus(chi, p));
    check_modulus(chi, p, big_f)?;
    check_point(s, 1, p)?;
    let emb = Embedding::for_character(chi, p, n)?;
    let x = shifted_argument(s, 1, p, n);
    let mut total = PAdicNumber::zero(p);
    for a in 1..=big_f {
        if a % p == 0 {
            continue;
        }
        if let Some(term) = summand(chi, &emb, &x, a, big_f, 1, p, n)? {
            total = total.add(&term);
        }
    }
    let total = total.div_integer(&BigInt::from(big_f))?;
    apply_prefactor(&total, s, 1, p, n)
}

/// Multivariate `L_{p,r}(s, χ)`, grouped by `σ = Σa_i` with composition counts.
#[allow(non_snake_case)]
pub fn multivariate_Lp(
    s: &PAdicArg,
    chi: &DirichletCharacter,
    r: u32,
    p: u64,
    n: u32,
    big_f: Option<u64>,
) -> Result<PAdicNumber> {
    if r == 0 {
        return Err(MathError::Domain("order r must be positive".into()));
    }
    check_prime(p)?;
    let big_f = big_f.unwrap_or_else(|| default_modulus(chi, p));
    check_modulus(chi, p, big_f)?;
    check_point(s, r, p)?;
    let emb = Embedding::for_character(chi, p, n)?;
    let x = shifted_argument(s, r, p, n);
    let counts = box_composition_counts(r, 1, big_f);
    let mut total = PAdicNumber::zero(p);
    for (i, w) in counts.iter().enumerate() {
        let sigma = i as u64 + r as u64;
        if sigma % p == 0 {
            continue;
        }
        if let Some(term) = summand(chi, &emb, &x, sigma, big_f, r, p, n)? {
            // scaling by the count must not claim more precision than the term has
            let abs = term.abs_precision().unwrap_or(i64::MAX);
            total = total.add(&term.mul_integer(w).truncate(abs));
        }
    }
    let total = total.div_integer(&BigInt::from(big_f).pow(r))?;
    apply_prefactor(&total, s, r, p, n)
}

/// Reference evaluation of `L_{p,r}(s, χ)` with one summand per tuple in `[1, F]^r`.
#[allow(non_snake_case)]
pub fn multivariate_Lp_literal(
    s: &PAdicArg,
    chi: &DirichletCharacter,
    r: u32,
    p: u64,
    n: u32,
    big_f: Option<u64>,
) -> Result<PAdicNumber> {
    if r == 0 {
        return Err(MathError::Domain("order r must be positive".into()));
    }
    check_prime(p)?;
    let big_f = big_f.unwrap_or_else(|| default_modulus(chi, p));
    check_modulus(chi, p, big_f)?;
    check_point(s, r, p)?;
    let emb = Embedding::for_character(chi, p, n)?;
    let x = shifted_argument(s, r, p, n);
    let mut total = PAdicNumber::zero(p);
    let mut tuple = vec![1u64; r as usize];
    loop {
        let sigma: u64 = tuple.iter().sum();
        if sigma % p != 0 {
            if let Some(term) = summand(chi, &emb, &x, sigma, big_f, r, p, n)? {
                total = total.add(&term);
            }
        }
        let mut pos = tuple.len();
        loop {
            if pos == 0 {
                let total = total.div_integer(&BigInt::from(big_f).pow(r))?;
                return apply_prefactor(&total, s, r, p, n);
            }
            pos -= 1;
            if tuple[pos] < big_f {
                tuple[pos] += 1;
                break;
            }
            tuple[pos] = 1;
        }
    }
}

/// `F^n Σ_{σ} w(σ) χ(σ) B^{(r)}_{n+r}(σ/F)` over sums `σ` of tuples in `[1, F]^r` accepted by `keep`.
fn weighted_bernoulli_sum(
    n: u32,
    r: u32,
    chi: &DirichletCharacter,
    big_f: u64,
    keep: impl Fn(u64) -> bool,
    arg: impl Fn(u64) -> i64,
    scale: &Rational,
) -> Result<CycloNumber> {
    let poly = multi_bernoulli_poly_coeffs(n + r, r)?;
    let mut acc = CycloAccumulator::new(chi.order());
    for (i, w) in box_composition_counts(r, 1, big_f).iter().enumerate() {
        let sigma = i as u64 + r as u64;
        if !keep(sigma) {
            continue;
        }
        let Some(k) = chi.exponent(arg(sigma)) else {
            continue;
        };
        let x = Rational::new(BigInt::from(sigma), BigInt::from(big_f));
        acc.add(k, &(eval_poly(&poly, &x) * Rational::from_integer(w.clone()) * scale));
    }
    Ok(acc.finish())
}

fn check_bernoulli_modulus(chi: &DirichletCharacter, p: u64, big_f: u64) -> Result<()> {
    check_prime(p)?;
    if big_f == 0 || big_f % chi.modulus() != 0 || big_f % p != 0 {
        return Err(MathError::Domain(format!(
            "F={big_f} must be a multiple of p={p} and f={}",
            chi.modulus()
        )));
    }
    Ok(())
}

/// `F^n Σ_{a ∈ [1, F]^r, p ∤ Σa} χ(Σa) B^{(r)}_{n+r}(Σa/F)`.
pub fn restricted_gen_bernoulli(
    n: u32,
    r: u32,
    chi_target: &DirichletCharacter,
    p: u64,
    big_f: u64,
) -> Result<CycloNumber> {
    check_bernoulli_modulus(chi_target, p, big_f)?;
    let scale = rat_pow(&rat_int(big_f), n as i64);
    weighted_bernoulli_sum(n, r, chi_target, big_f, |s| s % p != 0, |s| s as i64, &scale)
}

/// The same sum over all of `[1, F]^r`.
pub fn unrestricted_gen_bernoulli(
    n: u32,
    r: u32,
    chi_target: &DirichletCharacter,
    big_f: u64,
) -> Result<CycloNumber> {
    if big_f == 0 || big_f % chi_target.modulus() != 0 {
        return Err(MathError::Domain(format!("F={big_f} is not a multiple of the modulus")));
    }
    let scale = rat_pow(&rat_int(big_f), n as i64);
    weighted_bernoulli_sum(n, r, chi_target, big_f, |_| true, |s| s as i64, &scale)
}

/// The part of the sum with `p | Σa`.
pub fn p_divisible_gen_bernoulli(
    n: u32,
    r: u32,
    chi_target: &DirichletCharacter,
    p: u64,
    big_f: u64,
) -> Result<CycloNumber> {
    check_bernoulli_modulus(chi_target, p, big_f)?;
    let scale = rat_pow(&rat_int(big_f), n as i64);
    weighted_bernoulli_sum(n, r, chi_target, big_f, |s| s % p == 0, |s| s as i64, &scale)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BStarRoute {
    /// `(unrestricted - restricted) / (p^n χ(p))`; needs `χ(p) ≠ 0`.
    Quotient,
    /// `(F/p)^n Σ_{p | σ} w(σ) χ(σ/p) B^{(r)}_{n+r}(σ/F)`.
    Literal,
    /// Quotient when available, cross-checked against the literal sum.
    Auto,
}

/// The second multiple generalized Bernoulli number `B*^{(r)}_{n+r,χ}`.
pub fn second_gen_bernoulli(
    n: u32,
    r: u32,
    chi_target: &DirichletCharacter,
    p: u64,
    big_f: u64,
    route: BStarRoute,
) -> Result<CycloNumber> {
    check_bernoulli_modulus(chi_target, p, big_f)?;
    let quotient = || -> Result<CycloNumber> {
        let chi_p = chi_target.value(p as i64);
        if chi_p.is_zero() {
            return Err(MathError::Domain(format!(
                "χ({p}) = 0, the quotient route is unavailable"
            )));
        }
        let diff = &unrestricted_gen_bernoulli(n, r, chi_target, big_f)?
            - &restricted_gen_bernoulli(n, r, chi_target, p, big_f)?;
        let inv = chi_p.inv()?.scale(&rat_pow(&rat_int(p), -(n as i64)));
        Ok(&diff * &inv)
    };
    let literal = || -> Result<CycloNumber> {
        let scale = rat_pow(&Rational::new(BigInt::from(big_f), BigInt::from(p)), n as i64);
        weighted_bernoulli_sum(n, r, chi_target, big_f, |s| s % p == 0, |s| (s / p) as i64, &scale)
    };
    match route {
        BStarRoute::Quotient => quotient(),
        BStarRoute::Literal => literal(),
        BStarRoute::Auto => {
            let lit = literal()?;
            if chi_target.value(p as i64).is_zero() {
                return Ok(lit);
            }
            let quo = quotient()?;
            if quo != lit {
                return Err(MathError::InvariantViolation(format!(
                    "B* routes disagree: {quo} vs {lit}"
                )));
            }
            Ok(quo)
        }
    }
}

/// `-(1/n)(1 - χ_n(p) p^{n-1}) B_{n,χ_n}` with `χ_n = χ ω^{-n}`, in the cyclotomic field.
pub fn kubota_leopoldt_special(n: u32, chi: &DirichletCharacter, p: u64) -> Result<CycloNumber> {
    if n == 0 {
        return Err(MathError::Domain("n must be positive".into()));
    }
    let chi_n = twist(chi, n as i64, p)?;
    let b = gen_multi_bernoulli(n, 1, &chi_n)?;
    let euler = &CycloNumber::one(1)
        - &chi_n.value(p as i64).scale(&rat_pow(&rat_int(p), n as i64 - 1));
    Ok((&euler * &b).scale(&Rational::new(BigInt::from(-1), BigInt::from(n))))
}

/// One Theorem-4 style comparison at `s = -n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Theorem4Report {
    pub p: u64,
    pub precision: u32,
    pub r: u32,
    pub n: u32,
    pub modulus: u64,
    /// `L_{p,r}(-n, χ)`.
    pub lhs: PAdicNumber,
    /// `(-1)^r n!/(n+r)!` times the restricted Bernoulli sum of `χ_{n+r}`.
    pub rhs: PAdicNumber,
    pub rhs_exact: CycloNumber,
    pub comparison: Comparison,
}

/// Compares `L_{p,r}(-n, χ)` with `(-1)^r n!/(n+r)! (B^{(r)}_{n+r,χ_{n+r}} - χ_{n+r}(p) p^n B*)`.
pub fn verify_theorem4(
    n: u32,
    r: u32,
    chi: &DirichletCharacter,
    p: u64,
    prec: u32,
    big_f: Option<u64>,
) -> Result<Theorem4Report> {
    if n == 0 {
        return Err(MathError::Domain("n must be positive".into()));
    }
    check_prime(p)?;
    let big_f = big_f.unwrap_or_else(|| default_modulus(chi, p));
    let lhs = multivariate_Lp(&PAdicArg::Integer(-(n as i64)), chi, r, p, prec, Some(big_f))?;
    let chi_t = twist(chi, (n + r) as i64, p)?;
    let restricted = restricted_gen_bernoulli(n, r, &chi_t, p, big_f)?;
    let rhs_exact = restricted.scale(&special_value_factor(n, r));
    let rhs = embed_cyclo(&rhs_exact, p, prec)?;
    let comparison = Comparison::of(&lhs, &rhs);
    Ok(Theorem4Report {
        p,
        precision: prec,
        r,
        n,
        modulus: big_f,
        lhs,
        rhs,
        rhs_exact,
        comparison,
    })
}
