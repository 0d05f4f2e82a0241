use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChambrierError {
    #[error("unsupported root system type: {0}")]
    UnsupportedType(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty cone: the constraint system is infeasible")]
    EmptyCone,
    #[error("hypothesis {hypothesis} violated: {witness}")]
    HypothesisViolation { hypothesis: String, witness: String },
    #[error("zero direction vector")]
    ZeroDirection,
    #[error("window exhausted: {0}")]
    WindowExhausted(String),
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("rank {0} is not supported for rendering (rank 2 only)")]
    RankUnsupported(usize),
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("invalid input: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, ChambrierError>;

impl ChambrierError {
    pub fn hypothesis(h: &str, witness: impl Into<String>) -> Self {
        ChambrierError::HypothesisViolation {
            hypothesis: h.to_string(),
            witness: witness.into(),
        }
    }
}
