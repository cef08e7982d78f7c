use thiserror::Error;

/// Errors raised by the laboratory's engines.
#[derive(Debug, Error)]
pub enum FblError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid space model: {0}")]
    InvalidSpace(String),

    #[error("linear program has no finite optimum: {0}")]
    LinearProgram(String),

    #[error("a nonzero vector is required")]
    ZeroVector,

    #[error("operation requires {required}, got {got}")]
    WrongKind { required: &'static str, got: String },

    #[error("{count} terms exceed the sign-enumeration limit of {max}")]
    TooManyTerms { count: usize, max: usize },

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("terms {first} and {second} are parallel within angular tolerance {tolerance:e}")]
    ParallelPair {
        first: usize,
        second: usize,
        tolerance: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("certificate verification failed: {0}")]
    Verification(String),

    #[error("search did not reach {target}: best value {best} ({detail})")]
    SearchFailed {
        best: f64,
        target: f64,
        detail: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FblError>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(FblError::DimensionMismatch { expected, got });
    }
    Ok(())
}
