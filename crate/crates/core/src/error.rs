//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by constructors and coarse-graining operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |a_ij - conj(a_ji)| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix function undefined at eigenvalue {eigenvalue}")]
    DomainError { eigenvalue: f64 },

    #[error("action failed the linearity spot-check (defect {defect:e})")]
    NonlinearAction { defect: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid grid density: {0}")]
    InvalidDensity(String),

    #[error("unstable diffusion step: {0}")]
    UnstableStep(String),

    #[error("partition does not match the grid: {0}")]
    PartitionMismatch(String),

    #[error("index out of range or repeated: {0}")]
    IndexError(String),

    #[error("lambda must lie strictly inside (0, 1), got {0}")]
    LambdaOutOfRange(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("support of rho is not contained in support of sigma (weight {weight:e} outside)")]
    SupportMismatch { weight: f64 },

    #[error("parameter {name} = {value} outside its allowed range")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("state carries no bipartition")]
    NoBipartition,

    #[error("invalid projector basis: {0}")]
    InvalidBasis(String),

    #[error("invalid unitary ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("invalid super-scattering channel: {0}")]
    InvalidChannel(String),

    #[error("output state is not positive (smallest eigenvalue {min_eigenvalue:e})")]
    PositivityViolation { min_eigenvalue: f64 },

    #[error("channel is not attested entropy non-decreasing")]
    NonMonotoneChannel,

    #[error("diffusion time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
