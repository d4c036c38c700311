//! Result records shared by the evaluation routines and the command line.

use crate::arith::CycloNumber;
use crate::padic::PAdicNumber;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Route {
    ClosedForm,
    GeneratingFunction,
    DirectSummation,
    PadicSeries,
}

impl Route {
    pub fn tag(self) -> &'static str {
        match self {
            Route::ClosedForm => "closed-form",
            Route::GeneratingFunction => "generating-function",
            Route::DirectSummation => "direct-summation",
            Route::PadicSeries => "padic-series",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReportValue {
    Exact(CycloNumber),
    Float { re: f64, im: f64 },
    PAdic(PAdicNumber),
}

/// One evaluated special value with the routes that produced and checked it.
#[derive(Clone, Debug, PartialEq)]
pub struct LValueReport {
    pub r: u32,
    /// `-n` for special values, `s` for series evaluations.
    pub point: String,
    pub chi: String,
    pub modulus: Option<u64>,
    pub value: ReportValue,
    pub route: Route,
    pub cross_checked: Vec<Route>,
    /// Absolute difference between routes for float checks.
    pub residual: Option<f64>,
}

/// Outcome of comparing two p-adic values at their common guaranteed precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    /// Valuation of the difference of representatives; `None` when they coincide.
    pub diff_valuation: Option<i64>,
    /// Minimum of the two absolute precisions; `None` when both are exact.
    pub guaranteed: Option<i64>,
    pub pass: bool,
}

impl Comparison {
    pub fn of(lhs: &PAdicNumber, rhs: &PAdicNumber) -> Self {
        let diff_valuation = lhs.diff_valuation(rhs);
        let guaranteed = match (lhs.abs_precision(), rhs.abs_precision()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let pass = match (diff_valuation, guaranteed) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(d), Some(g)) => d >= g,
        };
        Comparison {
            diff_valuation,
            guaranteed,
            pass,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparison_semantics() {
        let a = PAdicNumber::from_integer(1, 5, 4);
        let b = PAdicNumber::from_integer(1 + 625, 5, 6);
        let c = Comparison::of(&a, &b);
        assert_eq!((c.diff_valuation, c.guaranteed, c.pass), (Some(4), Some(4), true));
        let d = Comparison::of(&a, &PAdicNumber::from_integer(6, 5, 6));
        assert!(!d.pass);
        let z = PAdicNumber::zero(5);
        assert!(Comparison::of(&z, &z).pass);
        assert!(!Comparison::of(&z, &a).pass);
        assert_eq!(Route::ClosedForm.tag(), "closed-form");
    }
}
