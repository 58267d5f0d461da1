use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("operation requires a non-empty point set")]
    EmptySet,

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("affine map is singular (determinant 0) but an injective map is required")]
    SingularMap,

    #[error("coordinate overflow: {0}")]
    Overflow(String),

    #[error("nonzero elements have gcd {0}, expected 1")]
    Gcd(i64),

    #[error("unexpected set structure: {0}")]
    Structure(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate point {point}")]
    Duplicate { line: usize, point: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
