//! Crate-wide error type.

use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian: symmetry defect {defect:.3e} exceeds {tol:.1e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("operator is not positive semi-definite: smallest eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid trace {trace:.6e}: expected a value in (0, 1 + 1e-10]")]
    InvalidTrace { trace: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("scalar function undefined at retained eigenvalue {eigenvalue:.6e}")]
    UndefinedAtEigenvalue { eigenvalue: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("divergence is infinite: {0}")]
    InfiniteDivergence(String),

    #[error("threshold search failed after {steps} bisection steps (bracket [{lo:.6e}, {hi:.6e}])")]
    SearchFailure { steps: usize, lo: f64, hi: f64 },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("channel validation failed: {0}")]
    ChannelValidation(String),

    #[error("channel file parse error: {0}")]
    ChannelParse(String),

    #[error("decoder construction failed: {0}")]
    Decoder(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
