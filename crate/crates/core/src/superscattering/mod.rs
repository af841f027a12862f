//! Super-scattering channels as `N^2 x N^2` matrices on row-major
//! `vec(rho)`, and the diffusion semigroups they generate.
//!
//! Under row-major vectorization `vec(A X B) = (A (x) B^T) vec(X)`.

mod channel;
mod diffusion;
mod ensemble;

pub use channel::{
    build_channel, incoherent_sum, ChannelLabel, ChannelSpec, SuperScattering,
    ATTESTATION_SAMPLES, MONOTONICITY_TOL, OUTPUT_HERMITIAN_TOL, POSITIVITY_TOL, TRACE_TOL,
};
pub use diffusion::{
    hilbert_diffusion, partial_trace_diffusion, reduced_product_additivity_defect,
    reduced_product_nonlinearity_witness, DiffusionPropagator,
};
pub use ensemble::{UnitaryEnsemble, UNITARY_TOL};
