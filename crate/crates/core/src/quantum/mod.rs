//! Density matrices, von Neumann entropy and the quantum coarse-graining
//! maps: maximal mixing, partial traces (plain, tuneable, asymmetric) and
//! decoherence in a chosen projector basis.

mod coarse;
mod curve;
mod entropy;
mod state;

pub use coarse::{
    asymmetric_mix, decohere_full, decohere_partial, maximal_mix, reduced_product,
    tuneable_asymmetric_mix, tuneable_partial_trace,
};
pub(crate) use coarse::{check_unit_interval, reduced_product_kernel};
#[cfg(test)]
pub(crate) use coarse::{maximal_mix_kernel, partial_maximal_kernel};
pub use curve::{
    default_s_grid, entropy_flow_curve, uniform_s_grid, CoarseFamily, CurvePoint,
    DEFAULT_S_POINTS,
};
pub use entropy::{
    mutual_information, relative_entropy, von_neumann_entropy, BipartiteEntropies, SUPPORT_TOL,
};
pub use state::{
    DensityMatrix, ProjectorBasis, BASIS_TOL, PSD_SLACK, STATE_HERMITIAN_TOL, STATE_TRACE_TOL,
};
