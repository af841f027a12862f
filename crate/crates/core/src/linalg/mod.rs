//! Dense complex linear algebra: Hermitian eigendecomposition, spectral
//! matrix functions, the matrix exponential, tensor products, partial traces
//! and superoperator vectorization.

mod eigen;
mod expm;
mod matrix;
mod tensor;

pub use eigen::{
    hermitian_eigendecompose, matrix_function, matrix_log_clamped, spectral_entropy,
    HermitianEigenSystem, HERMITIAN_TOL, JACOBI_MAX_SWEEPS, JACOBI_REL_TOL, LOG_CLAMP,
};
pub use expm::expm;
pub use matrix::{ComplexMatrix, C64};
pub use tensor::{
    partial_trace, tensor_product, unvectorize, vectorize, vectorize_superoperator, Subsystem,
};
