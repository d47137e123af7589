use thiserror::Error;

use crate::qmat::DensityViolation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not Hermitian: ||X - X^dag||_2 = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(DensityViolation),

    #[error("vectors are not orthonormal: Gram deviation {deviation:.3e}")]
    NotOrthonormal { deviation: f64 },

    #[error("Kraus family is not trace preserving: ||sum K^dag K - I||_2 = {deviation:.3e}")]
    NotTracePreserving { deviation: f64 },

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("d_A = {d_a} exceeds the optimizer guard d_A <= {max}")]
    UnsupportedDimension { d_a: usize, max: usize },

    #[error("Hermitian eigensolver did not converge")]
    EigenNoConvergence,

    #[error("measure evaluated to {value:.3e}, below the zero-clamp tolerance")]
    NegativeMeasure { value: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed encoding: {0}")]
    Encoding(String),
}

pub type Result<T> = std::result::Result<T, Error>;
