//! Exact arithmetic: rationals, cyclotomic field elements and truncated power series.

pub mod cyclo;
pub mod rational;
pub mod series;

pub use cyclo::{CycloAccumulator, CycloNumber};
pub use rational::Rational;
pub use series::{SeriesCoeff, TruncSeries};
