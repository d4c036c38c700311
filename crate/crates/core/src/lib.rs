//! Exact higher-order Bernoulli numbers, Dirichlet characters, special values of
//! multivariate Dirichlet L-functions and the multivariate p-adic L-function.

pub mod arith;
pub mod bernoulli;
pub mod characters;
pub mod classical;
pub mod error;
pub mod padic;
pub mod padic_l;
pub mod report;

pub use error::{MathError, Result};
