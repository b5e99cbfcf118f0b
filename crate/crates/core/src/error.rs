use thiserror::Error;

/// Errors produced by the algebra, matrix, series and differential-equation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown algebra tag `{0}`")]
    UnknownAlgebra(String),
    #[error("invalid algebra description: {0}")]
    InvalidAlgebra(String),
    #[error("algebra mismatch: `{left}` vs `{right}`")]
    AlgebraMismatch { left: String, right: String },
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("not invertible")]
    NotInvertible,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("Hadamard inverse undefined: entry ({row}, {col}) is zero")]
    HadamardUndefined { row: usize, col: usize },
    #[error("quasideterminant undefined at ({row}, {col})")]
    QuasideterminantUndefined { row: usize, col: usize },
    #[error("matrix is {0}-singular")]
    Singular(&'static str),
    #[error("series budget exceeded after {0} terms")]
    SeriesBudgetExceeded(usize),
    #[error("arity mismatch: expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
