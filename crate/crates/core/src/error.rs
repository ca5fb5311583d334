use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("digit position must be at least 1, got {0}")]
    InvalidPosition(u32),
    #[error("digit {digit} is not valid at position {position}")]
    InvalidDigit { digit: u8, position: u32 },
    #[error("input collection is empty")]
    EmptyInput,
    #[error("need at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },
    #[error("no included values at position {position} ({excluded} excluded)")]
    NoIncludedValues { position: u32, excluded: usize },
    #[error("significance level must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("degrees of freedom must be at least 1, got {0}")]
    InvalidDegreesOfFreedom(usize),
    #[error("expectation covers {expected} categories but the table has {observed}")]
    DomainMismatch { expected: usize, observed: usize },
    #[error("invalid expectation: {0}")]
    InvalidExpectation(String),
    #[error("invalid trim: {0}")]
    InvalidTrim(String),
    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),
    #[error("value at index {0} is not finite")]
    NonFinite(usize),
    #[error("scale factor must be positive and finite, got {0}")]
    InvalidScaleFactor(f64),
}
