use thiserror::Error;

/// Errors produced by the (p,q)-calculus engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PqError {
    #[error("p and q must differ")]
    EqualParameters,
    #[error("p and q must both be nonzero")]
    ZeroParameter,
    #[error("division by zero")]
    DivisionByZero,
    #[error("real powers need positive p and q (got p = {p}, q = {q})")]
    NonPositiveBase { p: f64, q: f64 },
    #[error("argument must be nonnegative, got {0}")]
    NegativeArgument(i64),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("value is not finite: {0}")]
    NonFinite(f64),
    #[error("derivative at 0 not supplied and the difference quotient did not settle")]
    MissingDerivativeAtZero,
    #[error("expression has a pole at x = {0}")]
    PoleAtPoint(String),
    #[error("integrals are undefined when |q/p| = 1")]
    DegenerateRegime,
    #[error("operation requires |q/p| < 1")]
    WrongRegime,
    #[error("invalid interval [{a}, {b}]: need 0 <= a < b")]
    InvalidInterval { a: f64, b: f64 },
    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),
    #[error("series diverged after {terms} terms")]
    DivergenceDetected { terms: usize },
    #[error("function has no limit at infinity attached")]
    MissingLimitAtInfinity,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = PqError> = std::result::Result<T, E>;
