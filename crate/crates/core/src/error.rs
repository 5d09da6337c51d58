use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("label sets overlap on `{0}`")]
    OverlappingLabels(String),

    #[error("invalid state: {invariant} invariant violated ({detail})")]
    InvalidState {
        invariant: &'static str,
        detail: String,
    },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("unsupported dimension {0}: {1}")]
    UnsupportedDimension(usize, String),

    #[error("invalid basis set: {0}")]
    InvalidBases(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("purity {0} outside [1/d, 1] for d = {1}")]
    PurityOutOfRange(f64, usize),

    #[error("bound invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
