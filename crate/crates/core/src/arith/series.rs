//! Truncated formal power series `c_0 + c_1 t + ... + c_{K-1} t^{K-1} + O(t^K)`.

use num_traits::{One, Zero};

use super::cyclo::CycloNumber;
use super::rational::{factorial, Rational};
use crate::error::{MathError, Result};

/// Coefficient rings a [`TruncSeries`] can be built over.
pub trait SeriesCoeff: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_coeff(&self) -> bool;
    fn add_c(&self, rhs: &Self) -> Self;
    fn sub_c(&self, rhs: &Self) -> Self;
    fn mul_c(&self, rhs: &Self) -> Self;
    fn scale_c(&self, r: &Rational) -> Self;
    fn inverse_c(&self) -> Option<Self>;
}

impl SeriesCoeff for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_c(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_c(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scale_c(&self, r: &Rational) -> Self {
        self * r
    }
    fn inverse_c(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

impl SeriesCoeff for CycloNumber {
    fn zero_like(&self) -> Self {
        CycloNumber::zero(self.order())
    }
    fn one_like(&self) -> Self {
        CycloNumber::one(self.order())
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_c(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_c(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scale_c(&self, r: &Rational) -> Self {
        self.scale(r)
    }
    fn inverse_c(&self) -> Option<Self> {
        self.inv().ok()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<R> {
    coeffs: Vec<R>,
}

impl<R: SeriesCoeff> TruncSeries<R> {
    /// Series with the given coefficients; the truncation order is their count.
    pub fn new(coeffs: Vec<R>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(MathError::Structural("series order must be positive".into()));
        }
        Ok(TruncSeries { coeffs })
    }

    /// The constant series `1` of order `k`; `proto` fixes the coefficient ring.
    pub fn one(k: usize, proto: &R) -> Self {
        let mut coeffs = vec![proto.zero_like(); k.max(1)];
        coeffs[0] = proto.one_like();
        TruncSeries { coeffs }
    }

    /// `e^{ct}` to order `k`: coefficient `j` is `c^j / j!`.
    pub fn exp_linear(c: &R, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(MathError::Structural("series order must be positive".into()));
        }
        let mut coeffs = Vec::with_capacity(k);
        let mut power = c.one_like();
        for j in 0..k {
            coeffs.push(power.scale_c(&Rational::from_integer(factorial(j as u64)).recip()));
            power = power.mul_c(c);
        }
        Ok(TruncSeries { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, j: usize) -> &R {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    fn check_order(&self, rhs: &Self) -> Result<()> {
        if self.order() != rhs.order() {
            return Err(MathError::Structural(format!(
                "series order mismatch: {} vs {}",
                self.order(),
                rhs.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        Ok(TruncSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.add_c(b)).collect(),
        })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| c.scale_c(r)).collect(),
        }
    }

    /// Cauchy product truncated to the common order.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        let k = self.order();
        let mut out: Vec<R> = vec![self.coeffs[0].zero_like(); k];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_coeff() {
                continue;
            }
            for (j, b) in rhs.coeffs[..k - i].iter().enumerate() {
                if !b.is_zero_coeff() {
                    out[i + j] = out[i + j].add_c(&a.mul_c(b));
                }
            }
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// Multiplicative inverse; the constant term must be invertible.
    pub fn inv(&self) -> Result<Self> {
        let c0_inv = self.coeffs[0].inverse_c().ok_or_else(|| {
            MathError::Domain("series constant term is not invertible".into())
        })?;
        let k = self.order();
        let mut out: Vec<R> = Vec::with_capacity(k);
        out.push(c0_inv.clone());
        for j in 1..k {
            let mut acc = c0_inv.zero_like();
            for i in 1..=j {
                if !self.coeffs[i].is_zero_coeff() {
                    acc = acc.add_c(&self.coeffs[i].mul_c(&out[j - i]));
                }
            }
            out.push(acc.mul_c(&c0_inv).scale_c(&-Rational::one()));
        }
        Ok(TruncSeries { coeffs: out })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = TruncSeries::one(self.order(), &self.coeffs[0]);
        for _ in 0..e {
            acc = acc.mul(self).expect("same order");
        }
        acc
    }

    /// Applies `f` coefficientwise, changing the coefficient ring.
    pub fn map<S: SeriesCoeff>(&self, f: impl Fn(&R) -> S) -> TruncSeries<S> {
        TruncSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::rational::rat;
    use super::*;

    fn rs(v: &[(i64, i64)]) -> TruncSeries<Rational> {
        TruncSeries::new(v.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    #[test]
    fn product_examples() {
        let a = rs(&[(1, 1), (1, 1), (0, 1)]);
        let b = rs(&[(1, 1), (-1, 1), (0, 1)]);
        assert_eq!(a.mul(&b).unwrap(), rs(&[(1, 1), (0, 1), (-1, 1)]));
        let one = TruncSeries::one(3, &rat(0, 1));
        assert_eq!(a.mul(&one).unwrap(), a);
        // (Σ B_n t^n/n!)^2 to order 4 has t-coefficient 2·B_1 = -1
        let bern = rs(&[(1, 1), (-1, 2), (1, 12), (0, 1)]);
        assert_eq!(*bern.mul(&bern).unwrap().coeff(1), rat(-1, 1));
    }

    #[test]
    fn order_mismatch_is_structural() {
        let a = rs(&[(1, 1), (1, 1)]);
        let b = rs(&[(1, 1), (1, 1), (1, 1)]);
        assert!(matches!(a.mul(&b), Err(MathError::Structural(_))));
    }

    #[test]
    fn inversion_examples() {
        let one = rs(&[(1, 1), (0, 1), (0, 1)]);
        assert_eq!(one.inv().unwrap(), one);
        let geometric = rs(&[(1, 1), (1, 1), (0, 1), (0, 1)]).inv().unwrap();
        assert_eq!(geometric, rs(&[(1, 1), (-1, 1), (1, 1), (-1, 1)]));
        // (e^t - 1)/t to order 4 inverts to t/(e^t - 1)
        let d = rs(&[(1, 1), (1, 2), (1, 6), (1, 24)]);
        let inv = d.inv().unwrap();
        assert_eq!(inv, rs(&[(1, 1), (-1, 2), (1, 12), (0, 1)]));
        assert_eq!(d.mul(&inv).unwrap(), TruncSeries::one(4, &rat(0, 1)));
        assert!(matches!(rs(&[(0, 1), (1, 1)]).inv(), Err(MathError::Domain(_))));
    }

    #[test]
    fn exp_linear_examples() {
        assert_eq!(
            TruncSeries::exp_linear(&rat(0, 1), 3).unwrap(),
            rs(&[(1, 1), (0, 1), (0, 1)])
        );
        assert_eq!(
            TruncSeries::exp_linear(&rat(1, 1), 3).unwrap(),
            rs(&[(1, 1), (1, 1), (1, 2)])
        );
        assert_eq!(
            TruncSeries::exp_linear(&rat(2, 1), 3).unwrap(),
            rs(&[(1, 1), (2, 1), (2, 1)])
        );
        assert!(TruncSeries::exp_linear(&rat(2, 1), 0).is_err());
    }

    #[test]
    fn cyclotomic_coefficients() {
        let z = CycloNumber::root_of_unity(4, 1);
        let e = TruncSeries::exp_linear(&z, 5).unwrap();
        let e_conj = TruncSeries::exp_linear(&z.conj(), 5).unwrap();
        // e^{it} e^{-it} = 1
        assert_eq!(e.mul(&e_conj).unwrap(), TruncSeries::one(5, &z));
    }
}
