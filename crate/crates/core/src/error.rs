use thiserror::Error;

use crate::symmetry::SymmetryClass;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix must have at least one row")]
    Empty,

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is singular to working precision")]
    SingularMatrix,

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("LAPACK failure: {0}")]
    Backend(String),

    #[error("class {class} requires an even dimension, found {n}")]
    OddDimension { class: SymmetryClass, n: usize },

    #[error("input is not nearly unitary (unitarity defect {unitarity:e})")]
    NotNearlyUnitary { unitarity: f64 },

    #[error("input violates the {class} relation (defect {defect:e})")]
    SymmetryDefect { class: SymmetryClass, defect: f64 },

    #[error("input is not a chiral unitary (unitarity {unitarity:e}, symmetry {symmetry:e})")]
    NotChiral { unitarity: f64, symmetry: f64 },

    #[error("signature of U*Gamma is ambiguous (smallest |eigenvalue| {smallest:e})")]
    AmbiguousSignature { smallest: f64 },

    #[error("chiral index {index} is nonzero: no structured square root or logarithm exists")]
    ObstructionDetected { index: i64 },

    #[error("square-root iteration did not converge in {iterations} iterations (last change {last_change:e})")]
    MaxIterationsExceeded { iterations: usize, last_change: f64 },

    #[error("I + 3ZY is singular; spectrum at or near -1")]
    SingularIteration,

    #[error("Pade argument has norm {norm} >= 0.5")]
    NormTooLarge { norm: f64 },

    #[error("structured diagonalization is not implemented for class {0}")]
    UnsupportedClass(SymmetryClass),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cancelled")]
    Cancelled,
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Backend(e.to_string())
    }
}
