//! Shannon entropy of discrete distributions and of sampled continuum
//! densities, with three families of coarse graining: diffusion
//! (continuum to continuum), box-averaging (continuum to discrete) and
//! pairwise aggregation (discrete to discrete).

mod diffusion;
mod distribution;
mod flow;
mod grid;

pub use diffusion::{
    diffusion_entropy_rate, diffusion_step, Boundary, DiffusionSpec, Diffusivity, Tensor3,
    TensorField, NEGATIVITY_SLACK, RATE_DENSITY_FLOOR, RATE_GRADIENT_FLOOR,
};
pub use distribution::{
    aggregate_asymmetric, aggregate_naive, negentropy, shannon_entropy, ProbabilityVector,
    NORMALIZATION_TOL,
};
pub use flow::{classical_flow, ClassicalFlowRecord};
pub use grid::{
    box_hidden_information, box_probabilities, boxwise_density, continuum_entropy,
    geometric_mean_volume, BoxPartition, GridDensity, GRID_NORMALIZATION_TOL,
    RHO_STAR_INVARIANCE_TOL,
};
