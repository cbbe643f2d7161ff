use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    Empty,
    #[error("negative entry {value} at index {index}")]
    NegativeEntry { index: usize, value: f64 },
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("entries sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("entries sum to zero")]
    ZeroSum,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
    #[error("histogram has no counts")]
    EmptyHistogram,
    #[error("holdout histogram has no counts")]
    EmptyHoldout,
    #[error("condition violated: {0}")]
    ConditionViolated(&'static str),
    #[error("division by zero lower bound")]
    DivideByZero,
    #[error("masses must be positive, at most d of them, and sum to 1")]
    BadMass,
    #[error("incompatible loss: {0}")]
    IncompatibleLoss(&'static str),
}
