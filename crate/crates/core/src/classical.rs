//! Generalized multiple Bernoulli numbers attached to a character, the special values
//! of the multiple Hurwitz-type function `H_r` and of `L_r(s, χ)` at negative
//! integers, and a float evaluator of the defining series for real `s > r`.
//!
//! All character-weighted sums run over tuples `(a_1, ..., a_r)` with
//! `0 ≤ a_i ≤ F - 1`, the range matching the defining series (`n_i ≥ 0`).
//! The summand depends on the tuple only through `σ = a_1 + ... + a_r`, so sums
//! are grouped by `σ` with [`box_composition_counts`] as weights.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::rational::{binomial, factorial, rat_int, rat_pow, Rational};
use crate::arith::{CycloAccumulator, CycloNumber, TruncSeries};
use crate::bernoulli::{eval_poly, multi_bernoulli_poly, multi_bernoulli_poly_coeffs};
use crate::characters::DirichletCharacter;
use crate::error::{MathError, Result};

/// `B^{(r)}_{n,χ}` together with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct GenBernoulli {
    pub n: u32,
    pub r: u32,
    pub character: DirichletCharacter,
    pub value: CycloNumber,
}

impl GenBernoulli {
    pub fn new(n: u32, r: u32, character: &DirichletCharacter) -> Result<Self> {
        Ok(GenBernoulli {
            n,
            r,
            character: character.clone(),
            value: gen_multi_bernoulli(n, r, character)?,
        })
    }
}

/// `#{(a_1..a_r) ∈ [lo, hi]^r : Σ a_i = σ}` for `σ = r·lo ..= r·hi`, indexed by `σ - r·lo`.
pub fn box_composition_counts(r: u32, lo: u64, hi: u64) -> Vec<BigInt> {
    assert!(lo <= hi);
    let width = (hi - lo) as usize;
    let mut counts = vec![BigInt::one()];
    for _ in 0..r {
        let mut next = vec![BigInt::zero(); counts.len() + width];
        for (i, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for slot in &mut next[i..=i + width] {
                *slot += c;
            }
        }
        counts = next;
    }
    counts
}

/// `c_r(k) = C(k + r - 1, r - 1)`, the number of `(n_1..n_r) ≥ 0` with `Σ n_i = k`.
pub fn composition_count(k: u64, r: u32) -> BigInt {
    assert!(r >= 1);
    binomial(k + r as u64 - 1, r as u64 - 1)
}

/// `B^{(r)}_{n,χ}` at the modulus of `χ`.
pub fn gen_multi_bernoulli(n: u32, r: u32, chi: &DirichletCharacter) -> Result<CycloNumber> {
    gen_multi_bernoulli_mod(n, r, chi, chi.modulus())
}

/// `F^{n-r} Σ_{a ∈ [0, F-1]^r} χ(Σa) B^{(r)}_n(Σa / F)` for a multiple `F` of the modulus.
pub fn gen_multi_bernoulli_mod(
    n: u32,
    r: u32,
    chi: &DirichletCharacter,
    modulus: u64,
) -> Result<CycloNumber> {
    check_multiple(chi, modulus)?;
    let poly = multi_bernoulli_poly_coeffs(n, r)?;
    let big_f = Rational::from_integer(BigInt::from(modulus));
    let scale = rat_pow(&big_f, n as i64 - r as i64);
    let mut acc = CycloAccumulator::new(chi.order());
    for (i, w) in box_composition_counts(r, 0, modulus - 1).iter().enumerate() {
        let sigma = i as u64;
        let Some(k) = chi.exponent(sigma as i64) else {
            continue;
        };
        let x = Rational::new(BigInt::from(sigma), BigInt::from(modulus));
        acc.add(k, &(eval_poly(&poly, &x) * Rational::from_integer(w.clone()) * &scale));
    }
    Ok(acc.finish())
}

/// `n!` times the `t^n` coefficient of `Σ_{a ∈ [0, f-1]^r} χ(Σa) t^r e^{tΣa} / (e^{ft} - 1)^r`,
/// expanded as truncated series over the cyclotomic field with one term per tuple.
pub fn gen_multi_bernoulli_oracle(n: u32, r: u32, chi: &DirichletCharacter) -> Result<CycloNumber> {
    if r == 0 {
        return Err(MathError::Domain("order r must be positive".into()));
    }
    let f = chi.modulus();
    let k = (n + r + 1) as usize;
    let inv_fact: Vec<Rational> = (0..k)
        .map(|j| Rational::from_integer(factorial(j as u64)).recip())
        .collect();
    let mut coeff_acc: Vec<CycloAccumulator> =
        (0..k).map(|_| CycloAccumulator::new(chi.order())).collect();
    let mut tuple = vec![0u64; r as usize];
    loop {
        let sigma: u64 = tuple.iter().sum();
        if let Some(e) = chi.exponent(sigma as i64) {
            let s = Rational::from_integer(BigInt::from(sigma));
            let mut power = Rational::one();
            for (j, slot) in coeff_acc.iter_mut().enumerate() {
                slot.add(e, &(&power * &inv_fact[j]));
                power *= &s;
            }
        }
        if !next_tuple(&mut tuple, f) {
            break;
        }
    }
    let numerator =
        TruncSeries::new(coeff_acc.into_iter().map(CycloAccumulator::finish).collect())?;
    // (e^{ft} - 1)/t = Σ_j f^{j+1} t^j / (j+1)!
    let big_f = Rational::from_integer(BigInt::from(f));
    let denom = TruncSeries::new(
        (0..k)
            .map(|j| rat_pow(&big_f, j as i64 + 1) / Rational::from_integer(factorial(j as u64 + 1)))
            .collect(),
    )?
    .inv()?
    .pow(r);
    let denom = denom.map(|c| CycloNumber::from_rational(chi.order(), c.clone()));
    let product = numerator.mul(&denom)?;
    Ok(product
        .coeff(n as usize)
        .scale(&Rational::from_integer(factorial(n as u64))))
}

fn next_tuple(tuple: &mut [u64], base: u64) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

fn check_multiple(chi: &DirichletCharacter, modulus: u64) -> Result<()> {
    if modulus == 0 || modulus % chi.modulus() != 0 {
        return Err(MathError::Domain(format!(
            "modulus {modulus} is not a multiple of {}",
            chi.modulus()
        )));
    }
    Ok(())
}

/// `(-1)^r n!/(n+r)!`.
pub fn special_value_factor(n: u32, r: u32) -> Rational {
    let sign = if r % 2 == 0 { 1 } else { -1 };
    Rational::new(
        BigInt::from(sign) * factorial(n as u64),
        factorial(n as u64 + r as u64),
    )
}

/// `ζ_r(-n, x) = (-1)^r n!/(n+r)! · B^{(r)}_{n+r}(x)`.
pub fn multiple_hurwitz_negative(n: u32, r: u32, x: &Rational) -> Result<Rational> {
    Ok(special_value_factor(n, r) * multi_bernoulli_poly(n + r, r, x)?)
}

/// `H_r(-n; a_1..a_r | F) = F^n (-1)^r n!/(n+r)! · B^{(r)}_{n+r}((Σa_i)/F)`, for `0 ≤ a_i < F`.
#[allow(non_snake_case)]
pub fn H_special(n: u32, r: u32, a_vec: &[u64], modulus: u64) -> Result<Rational> {
    if a_vec.len() != r as usize || r == 0 {
        return Err(MathError::Domain(format!(
            "expected {r} shift parameters, got {}",
            a_vec.len()
        )));
    }
    if let Some(a) = a_vec.iter().find(|&&a| a >= modulus) {
        return Err(MathError::Domain(format!("shift {a} outside [0, {modulus})")));
    }
    let sigma: u64 = a_vec.iter().sum();
    let x = Rational::new(BigInt::from(sigma), BigInt::from(modulus));
    Ok(rat_pow(&rat_int(modulus), n as i64) * multiple_hurwitz_negative(n, r, &x)?)
}

/// A tuple in `[0, F-1]^r` with the given sum.
fn representative_tuple(sigma: u64, r: u32, modulus: u64) -> Vec<u64> {
    let mut rest = sigma;
    (0..r)
        .map(|_| {
            let a = rest.min(modulus - 1);
            rest -= a;
            a
        })
        .collect()
}

/// `L_r(-n, χ)` assembled as `Σ_{a ∈ [0, F-1]^r} χ(Σa) H_r(-n; a | F)` and checked
/// against `(-1)^r n!/(n+r)! · B^{(r)}_{n+r,χ}`.
#[allow(non_snake_case)]
pub fn L_special(n: u32, r: u32, chi: &DirichletCharacter, modulus: u64) -> Result<CycloNumber> {
    if n == 0 {
        return Err(MathError::Domain("n must be positive".into()));
    }
    check_multiple(chi, modulus)?;
    let mut acc = CycloAccumulator::new(chi.order());
    for (sigma, w) in box_composition_counts(r, 0, modulus - 1).iter().enumerate() {
        let Some(k) = chi.exponent(sigma as i64) else {
            continue;
        };
        let a = representative_tuple(sigma as u64, r, modulus);
        acc.add(k, &(H_special(n, r, &a, modulus)? * Rational::from_integer(w.clone())));
    }
    let assembled = acc.finish();
    let closed = gen_multi_bernoulli(n + r, r, chi)?.scale(&special_value_factor(n, r));
    if assembled != closed {
        return Err(MathError::InvariantViolation(format!(
            "L_{r}(-{n}) routes disagree at F={modulus}: {assembled} vs {closed}"
        )));
    }
    Ok(closed)
}

/// Number of terms `K` after which the tail of `Σ c_r(k) χ(k) k^{-s}` is below `tol`.
///
/// Uses `c_r(k) ≤ r·k^{r-1}`, so the tail past `K` is at most `r·K^{r-s}/(s-r)`.
pub fn l_numeric_cutoff(s: f64, r: u32, tol: f64) -> Result<u64> {
    let r_f = r as f64;
    if !(s > r_f) {
        return Err(MathError::Domain(format!("series diverges for s={s} ≤ r={r}")));
    }
    if !(tol > 0.0) {
        return Err(MathError::Domain("tolerance must be positive".into()));
    }
    let k = (tol * (s - r_f) / r_f).powf(1.0 / (r_f - s)).ceil().max(1.0);
    if k > 2e9 {
        return Err(MathError::Domain(format!(
            "tolerance {tol} needs {k:e} terms at s={s}, r={r}"
        )));
    }
    Ok(k as u64)
}

/// `Σ_{k ≥ 1} C(k+r-1, r-1) χ(k) k^{-s}` as a complex float, within `tol`.
#[allow(non_snake_case)]
pub fn L_numeric(s: f64, r: u32, chi: &DirichletCharacter, tol: f64) -> Result<(f64, f64)> {
    if r == 0 {
        return Err(MathError::Domain("order r must be positive".into()));
    }
    let cutoff = l_numeric_cutoff(s, r, tol)?;
    let values: Vec<(f64, f64)> = (0..chi.modulus() as i64).map(|a| chi.value_complex(a)).collect();
    let f = chi.modulus();
    let (mut re, mut im) = (0.0f64, 0.0f64);
    // smallest terms first
    for k in (1..=cutoff).rev() {
        let (cr, ci) = values[(k % f) as usize];
        if cr == 0.0 && ci == 0.0 {
            continue;
        }
        let kf = k as f64;
        let count: f64 = (1..r).map(|j| (kf + j as f64) / j as f64).product();
        let t = count * kf.powf(-s);
        re += t * cr;
        im += t * ci;
    }
    Ok((re, im))
}

/// `ζ(2m) = (-1)^{m+1} B_{2m} (2π)^{2m} / (2·(2m)!)` as a float.
pub fn zeta_even(m: u32) -> f64 {
    assert!(m >= 1);
    let b = crate::bernoulli::bernoulli(2 * m).to_f64().expect("finite");
    let two_pi = 2.0 * std::f64::consts::PI;
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    let fact = factorial(2 * m as u64).to_f64().expect("finite");
    sign * b * two_pi.powi(2 * m as i32) / (2.0 * fact)
}
