use benford_forensics::ingest::IngestError;
use benford_forensics::Error as CoreError;
use thiserror::Error;

/// Exit status 1 for bad invocations, 2 for input data problems.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidPosition(_)
            | CoreError::InvalidDigit { .. }
            | CoreError::InvalidAlpha(_)
            | CoreError::InvalidDegreesOfFreedom(_)
            | CoreError::InvalidTrim(_)
            | CoreError::InvalidGenerator(_)
            | CoreError::InvalidScaleFactor(_) => CliError::Usage(e.to_string()),
            CoreError::EmptyInput
            | CoreError::TooFewValues { .. }
            | CoreError::NoIncludedValues { .. }
            | CoreError::DomainMismatch { .. }
            | CoreError::InvalidExpectation(_)
            | CoreError::NonFinite(_) => CliError::Data(e.to_string()),
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
