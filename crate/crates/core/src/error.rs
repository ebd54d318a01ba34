use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid precision {0}; must be at least 1")]
    InvalidPrecision(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a unit")]
    NotUnit,
    #[error("operands live over different moduli")]
    ModulusMismatch,
    #[error("inner series has a nonzero constant term")]
    NonZeroConstantTerm,
    #[error("linear coefficient is not invertible")]
    NonInvertibleLinear,
    #[error("truncation degree {got} is too small; need at least {needed}")]
    InsufficientTruncation { needed: usize, got: usize },
    #[error("composition {0} is not admissible (first part must be at least 2)")]
    NonAdmissible(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("iteration did not converge within {0} steps")]
    NonConvergence(usize),
    #[error("parse error: {0}")]
    Parse(String),
}
