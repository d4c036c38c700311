use thiserror::Error;

/// Errors raised by the arithmetic and L-function routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MathError {
    /// Operands that cannot be combined (mismatched series orders and the like).
    #[error("structural error: {0}")]
    Structural(String),
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Evaluation at a pole of an L-function.
    #[error("pole at s = {0}")]
    Pole(i64),
    /// A character whose values do not embed into the p-adic base field.
    #[error("character of order {order} does not embed into Q_{p}")]
    UnsupportedCharacter { order: u64, p: u64 },
    #[error("invalid prime: {0}")]
    InvalidPrime(u64),
    #[error("unknown character label: {0}")]
    UnknownCharacter(String),
    /// Two computation routes that must agree did not.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, MathError>;
