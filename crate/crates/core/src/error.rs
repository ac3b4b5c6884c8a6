use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: dimension must be at least 1")]
    Empty,

    #[error("first column and first row disagree on the diagonal entry ({col} vs {row})")]
    CornerMismatch { col: String, row: String },

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("dense materialization of n={n} exceeds cap {cap}")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("shifted spectrum is near-singular: min |sigma + lambda| = {0:e}")]
    NearSingularShift(f64),

    #[error("matrix is singular to working precision (pivot {0:e})")]
    Singular(f64),

    #[error("parameter sigma must be positive, got {0}")]
    NonPositiveSigma(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("iteration diverged after {iterations} steps (relative residual {residual:e})")]
    Diverged { iterations: usize, residual: f64 },

    #[error("right-hand side is zero")]
    ZeroRhs,

    #[error("Hermitian part is not positive definite (smallest eigenvalue estimate {0:e})")]
    Indefinite(f64),

    #[error("eigenvalue computation failed to converge")]
    EigenFailure,
}

pub type Result<T> = std::result::Result<T, Error>;
