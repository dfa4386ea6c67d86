//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    /// Division by a zero rational function or scalar.
    #[error("zero denominator")]
    ZeroDenominator,

    /// Rational-function evaluation at a root of the denominator.
    #[error("evaluation at pole")]
    EvalAtPole,

    /// A lower hypergeometric parameter produced a zero Pochhammer factor
    /// before the series terminated.
    #[error("lower parameter collision")]
    LowerParameterCollision,

    /// No upper parameter is a nonpositive integer, so the series does not
    /// terminate.
    #[error("series does not terminate")]
    NonTerminating,

    /// Whipple's transform applied to a non-balanced 4F3.
    #[error("balance condition violated")]
    BalanceViolated,

    /// A rational lambda hit the excluded (non-generic) set of the formula.
    #[error("non-generic lambda")]
    NonGenericLambda,

    /// A truncated universal element was applied to a module it cannot
    /// represent exactly.
    #[error("truncation below module depth")]
    TruncationTooLow,

    /// Invalid CLI configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Output stream failure (message only, to keep the type comparable).
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CoreError {
    fn from(e: std::io::Error) -> Self {
        CoreError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
