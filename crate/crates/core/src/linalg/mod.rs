//! Dense complex Hermitian linear algebra.
//!
//! Scope:
//! - square complex matrices with a cyclic Jacobi eigensolver
//! - Hermitian / density operator types with validated invariants
//! - matrix functions on the support, tensor and partial-trace plumbing
//! - trace norm, fidelity, purified distance, spectral projectors
//!
//! All operations are pure functions of immutable inputs.

mod eig;
mod matrix;
mod ops;

pub use eig::{EigenDecomposition, EIG_HERMITICITY_TOL, OFF_DIAG_TOL};
pub use matrix::CMatrix;
pub use ops::{
    eig_hermitian, fidelity, inv_sqrt_on_support, log2_on_support, matrix_fn, partial_trace,
    positive_part_projector, purified_distance, root_fidelity, sqrt_psd, tensor, trace_distance,
    trace_norm, DensityOperator, HermitianOperator, HERMITICITY_TOL, KERNEL_TOL, PSD_TOL,
    SUPPORT_CUTOFF, TRACE_TOL,
};

pub(crate) use matrix::rayleigh_diagonal;
pub(crate) use ops::support_leak;
