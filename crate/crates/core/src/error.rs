use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("metric is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("normalization needs an irrational square root ({0}); rerun in float mode")]
    IrrationalNorm(String),

    #[error("frame is not orthonormal (Gram deviation {0})")]
    NotOrthonormal(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("distribution is not bracket-generating (growth vector {0:?})")]
    NotBracketGenerating(Vec<usize>),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("abnormal covector: normal control undefined because xi annihilates D")]
    Abnormal,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error in entry {entry:?}: {message}")]
    Schema { entry: String, message: String },

    #[error("unknown catalog id {0:?}")]
    UnknownEntry(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Failures caused by floating point breakdown rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Numeric(_) | Error::Inconsistency(_) | Error::Abnormal | Error::Singular(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
