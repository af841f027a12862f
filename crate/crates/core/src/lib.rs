//! Coarse graining of classical (Shannon) and quantum (von Neumann) entropy.
//!
//! Every model here is a tunable transformation that never decreases entropy,
//! together with the "hidden information" it produces: the entropy gained by
//! agreeing not to look at some part of the state.
//!
//! | Module | Models |
//! |--------|--------|
//! | [`classical`] | Shannon and continuum entropy, diffusion, box-averaging, aggregation |
//! | [`quantum`] | von Neumann entropy, maximal mixing, partial traces, decoherence |
//! | [`superscattering`] | trace-preserving channels and Hilbert-space diffusion `exp(t($ - I))` |
//! | [`experiments`] | JSON-configured runs, CSV/JSON output, invariant audit |
//! | [`linalg`] | the dense complex linear algebra underneath |
//!
//! All entropies are in nats.
//!
//! ```
//! use entropyflow::quantum::{self, DensityMatrix};
//!
//! let bell = DensityMatrix::bell();
//! let product = quantum::reduced_product(&bell).unwrap();
//! let gained = quantum::von_neumann_entropy(&product) - quantum::von_neumann_entropy(&bell);
//! assert!((gained - 2.0 * 2f64.ln()).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod quantum;
pub mod sampling;
pub mod superscattering;

pub use error::{Error, Result};
