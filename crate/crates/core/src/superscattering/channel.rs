use std::fmt;
use std::str::FromStr;

use super::ensemble::UnitaryEnsemble;
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigendecompose, tensor_product, unvectorize, vectorize, vectorize_superoperator,
    ComplexMatrix, C64,
};
use crate::quantum::{check_unit_interval, von_neumann_entropy, DensityMatrix, ProjectorBasis, PSD_SLACK};
use crate::sampling::{random_density_matrix_with_rank, rng_from_seed};

/// Samples drawn when attesting a custom channel.
pub const ATTESTATION_SAMPLES: usize = 200;
/// `|tr($ E_kl) - delta_kl|` allowed on every matrix unit.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue allowed in a sampled output.
pub const POSITIVITY_TOL: f64 = -1e-9;
/// Entropy decrease tolerated before a channel is declared non-monotone.
pub const MONOTONICITY_TOL: f64 = -1e-9;
/// Hermiticity defect allowed in a sampled output.
pub const OUTPUT_HERMITIAN_TOL: f64 = 1e-10;

/// Where a channel's matrix came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelLabel {
    Maximal,
    PartialMaximal,
    PartialMaximalTuneable,
    FullDecoherence,
    PartialDecoherence,
    IncoherentSum,
    Custom,
}

impl ChannelLabel {
    pub const TABLE: [ChannelLabel; 6] = [
        ChannelLabel::Maximal,
        ChannelLabel::PartialMaximal,
        ChannelLabel::PartialMaximalTuneable,
        ChannelLabel::FullDecoherence,
        ChannelLabel::PartialDecoherence,
        ChannelLabel::IncoherentSum,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ChannelLabel::Maximal => "maximal",
            ChannelLabel::PartialMaximal => "partialMaximal",
            ChannelLabel::PartialMaximalTuneable => "partialMaximalTuneable",
            ChannelLabel::FullDecoherence => "fullDecoherence",
            ChannelLabel::PartialDecoherence => "partialDecoherence",
            ChannelLabel::IncoherentSum => "incoherentSum",
            ChannelLabel::Custom => "custom",
        }
    }
}

impl fmt::Display for ChannelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChannelLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChannelLabel::TABLE
            .into_iter()
            .chain([ChannelLabel::Custom])
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown channel label {s:?}")))
    }
}

/// Parameters of a table channel.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelSpec {
    /// `rho -> (1-s) rho + s I/N`.
    Maximal { dim: usize, s: f64 },
    /// `rho -> rho_A (x) I_B / N_B`.
    PartialMaximal { dims: (usize, usize) },
    /// `rho -> (1-s) rho + s rho_A (x) I_B / N_B`.
    PartialMaximalTuneable { dims: (usize, usize), s: f64 },
    /// `rho -> sum_a P_a tr(P_a rho)`.
    FullDecoherence(ProjectorBasis),
    /// `rho -> (1-s) rho + s rho_D`.
    PartialDecoherence { basis: ProjectorBasis, s: f64 },
    /// `rho -> sum_i p_i U_i^dagger rho U_i`.
    IncoherentSum(UnitaryEnsemble),
}

impl ChannelSpec {
    pub fn label(&self) -> ChannelLabel {
        match self {
            ChannelSpec::Maximal { .. } => ChannelLabel::Maximal,
            ChannelSpec::PartialMaximal { .. } => ChannelLabel::PartialMaximal,
            ChannelSpec::PartialMaximalTuneable { .. } => ChannelLabel::PartialMaximalTuneable,
            ChannelSpec::FullDecoherence(_) => ChannelLabel::FullDecoherence,
            ChannelSpec::PartialDecoherence { .. } => ChannelLabel::PartialDecoherence,
            ChannelSpec::IncoherentSum(_) => ChannelLabel::IncoherentSum,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ChannelSpec::Maximal { dim, .. } => *dim,
            ChannelSpec::PartialMaximal { dims } | ChannelSpec::PartialMaximalTuneable { dims, .. } => {
                dims.0 * dims.1
            }
            ChannelSpec::FullDecoherence(basis) | ChannelSpec::PartialDecoherence { basis, .. } => {
                basis.dim()
            }
            ChannelSpec::IncoherentSum(e) => e.dim(),
        }
    }
}

/// A trace-preserving linear map on `N x N` density matrices, stored as its
/// `N^2 x N^2` matrix acting on row-major `vec(rho)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperScattering {
    dim: usize,
    matrix: ComplexMatrix,
    label: ChannelLabel,
    monotone: bool,
    seed: Option<u64>,
}

/// `vec(I_N)`.
fn vec_identity(n: usize) -> Vec<C64> {
    vectorize(&ComplexMatrix::identity(n))
}

fn maximal_matrix(n: usize, s: f64) -> ComplexMatrix {
    let v = vec_identity(n);
    ComplexMatrix::outer(&v, &v).lin_comb(s / n as f64, &ComplexMatrix::identity(n * n), 1.0 - s)
}

fn partial_maximal_matrix(na: usize, nb: usize) -> ComplexMatrix {
    let n = na * nb;
    let mut m = ComplexMatrix::zeros(n * n, n * n);
    let w = C64::new(1.0 / nb as f64, 0.0);
    // out[(a b),(a' b)] = (1/N_B) sum_c x[(a c),(a' c)]
    for a in 0..na {
        for a2 in 0..na {
            for b in 0..nb {
                let row = (a * nb + b) * n + (a2 * nb + b);
                for c in 0..nb {
                    let col = (a * nb + c) * n + (a2 * nb + c);
                    m[(row, col)] = w;
                }
            }
        }
    }
    m
}

fn decoherence_matrix(basis: &ProjectorBasis) -> ComplexMatrix {
    let n = basis.dim();
    let mut m = ComplexMatrix::zeros(n * n, n * n);
    // tr(P x) = vec(P^T) . vec(x)
    for p in basis.projectors() {
        m = &m + &ComplexMatrix::outer(&vectorize(&p), &vectorize(&p.transpose().conj()));
    }
    m
}

fn incoherent_sum_matrix(ens: &UnitaryEnsemble) -> Result<ComplexMatrix> {
    let n = ens.dim();
    let mut m = ComplexMatrix::zeros(n * n, n * n);
    // vec(A X B) = (A (x) B^T) vec(X) with A = U^dagger, B = U.
    for (p, u) in ens.terms() {
        m = m.lin_comb(1.0, &tensor_product(&u.adjoint(), &u.transpose())?, p);
    }
    Ok(m)
}

fn check_dims(dims: (usize, usize)) -> Result<()> {
    if dims.0 == 0 || dims.1 == 0 {
        return Err(Error::InvalidChannel(format!("bipartition {dims:?}")));
    }
    Ok(())
}

/// Table channel from its closed-form matrix; `monotone` holds by construction.
pub fn build_channel(spec: &ChannelSpec) -> Result<SuperScattering> {
    let matrix = match spec {
        ChannelSpec::Maximal { dim, s } => {
            check_unit_interval("s", *s)?;
            if *dim == 0 {
                return Err(Error::InvalidChannel("dimension 0".into()));
            }
            maximal_matrix(*dim, *s)
        }
        ChannelSpec::PartialMaximal { dims } => {
            check_dims(*dims)?;
            partial_maximal_matrix(dims.0, dims.1)
        }
        ChannelSpec::PartialMaximalTuneable { dims, s } => {
            check_dims(*dims)?;
            check_unit_interval("s", *s)?;
            let n = dims.0 * dims.1;
            partial_maximal_matrix(dims.0, dims.1).lin_comb(*s, &ComplexMatrix::identity(n * n), 1.0 - s)
        }
        ChannelSpec::FullDecoherence(basis) => decoherence_matrix(basis),
        ChannelSpec::PartialDecoherence { basis, s } => {
            check_unit_interval("s", *s)?;
            let n = basis.dim();
            decoherence_matrix(basis).lin_comb(*s, &ComplexMatrix::identity(n * n), 1.0 - s)
        }
        ChannelSpec::IncoherentSum(ens) => incoherent_sum_matrix(ens)?,
    };
    Ok(SuperScattering {
        dim: spec.dim(),
        matrix,
        label: spec.label(),
        monotone: true,
        seed: None,
    })
}

impl SuperScattering {
    pub fn identity(n: usize) -> Result<Self> {
        build_channel(&ChannelSpec::Maximal { dim: n, s: 0.0 })
    }

    /// A user-supplied map. Trace preservation is checked on every matrix
    /// unit; positivity and entropy monotonicity on [`ATTESTATION_SAMPLES`]
    /// random states drawn from `seed`. A failed monotonicity sample leaves
    /// the channel usable but marks it non-monotone.
    pub fn custom(dim: usize, matrix: ComplexMatrix, seed: u64) -> Result<Self> {
        let n2 = dim * dim;
        if dim == 0 || matrix.rows() != n2 || matrix.cols() != n2 {
            return Err(Error::InvalidChannel(format!(
                "a channel on dimension {dim} needs a {n2}x{n2} matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let mut chan = SuperScattering {
            dim,
            matrix,
            label: ChannelLabel::Custom,
            monotone: false,
            seed: Some(seed),
        };
        let defect = chan.trace_defect();
        if defect > TRACE_TOL {
            return Err(Error::InvalidChannel(format!(
                "not trace preserving (defect {defect:e})"
            )));
        }
        chan.monotone = chan.attest(seed)?;
        Ok(chan)
    }

    /// Vectorizes `action` and attests it as in [`SuperScattering::custom`].
    pub fn from_action<F>(dim: usize, action: F, seed: u64) -> Result<Self>
    where
        F: Fn(&ComplexMatrix) -> ComplexMatrix,
    {
        Self::custom(dim, vectorize_superoperator(dim, action)?, seed)
    }

    fn attest(&self, seed: u64) -> Result<bool> {
        let mut rng = rng_from_seed(seed);
        let mut monotone = true;
        for k in 0..ATTESTATION_SAMPLES {
            // Cycle through ranks so pure and full-rank states are both seen.
            let rank = 1 + k % self.dim;
            let rho = random_density_matrix_with_rank(&mut rng, self.dim, rank)?;
            let out = self.raw_apply(rho.matrix())?;
            let defect = out.hermitian_defect();
            if defect > OUTPUT_HERMITIAN_TOL {
                return Err(Error::InvalidChannel(format!(
                    "output not Hermitian (defect {defect:e})"
                )));
            }
            let eig = hermitian_eigendecompose(&out.hermitian_part())?;
            let min = eig.eigenvalues[0];
            if min < POSITIVITY_TOL {
                return Err(Error::PositivityViolation { min_eigenvalue: min });
            }
            let after = crate::linalg::spectral_entropy(&eig.eigenvalues);
            if after - von_neumann_entropy(&rho) < MONOTONICITY_TOL {
                monotone = false;
            }
        }
        Ok(monotone)
    }

    /// Forces the monotone attestation on. Only meant for exercising the
    /// audit's fault detection.
    pub fn assume_monotone(mut self) -> Self {
        self.monotone = true;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn label(&self) -> ChannelLabel {
        self.label
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    /// Seed of the randomized attestation (custom channels only).
    pub fn attestation_seed(&self) -> Option<u64> {
        self.seed
    }

    /// `max_kl |tr($ E_kl) - delta_kl|` over all matrix units.
    pub fn trace_defect(&self) -> f64 {
        let n = self.dim;
        let n2 = n * n;
        (0..n2)
            .map(|col| {
                let tr: C64 = (0..n).map(|i| self.matrix[(i * n + i, col)]).sum();
                let expected = if col / n == col % n { 1.0 } else { 0.0 };
                (tr - expected).norm()
            })
            .fold(0.0, f64::max)
    }

    pub(crate) fn raw_apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "channel on dimension {} applied to a {}x{} matrix",
                self.dim,
                x.rows(),
                x.cols()
            )));
        }
        unvectorize(&self.matrix.apply_vec(&vectorize(x))?, self.dim)
    }

    /// `unvec($ vec(rho))`, keeping `rho`'s bipartition.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.raw_apply(rho.matrix())?;
        finish_state(out, rho.bipartition())
    }

    /// `a . b`: apply `b` first.
    pub fn compose(a: &SuperScattering, b: &SuperScattering) -> Result<SuperScattering> {
        if a.dim != b.dim {
            return Err(Error::DimensionMismatch(format!(
                "composing channels on dimensions {} and {}",
                a.dim, b.dim
            )));
        }
        Ok(SuperScattering {
            dim: a.dim,
            matrix: a.matrix.matmul(&b.matrix)?,
            label: ChannelLabel::Custom,
            monotone: a.monotone && b.monotone,
            seed: None,
        })
    }

    /// `Delta = $ - I`.
    pub fn generator(&self) -> ComplexMatrix {
        let n2 = self.dim * self.dim;
        self.matrix.lin_comb(1.0, &ComplexMatrix::identity(n2), -1.0)
    }
}

/// Validates a computed output, reporting negative spectra as
/// [`Error::PositivityViolation`].
pub(crate) fn finish_state(out: ComplexMatrix, bipartition: Option<(usize, usize)>) -> Result<DensityMatrix> {
    let h = out.hermitian_part();
    match DensityMatrix::from_computed(h.clone(), bipartition) {
        Ok(rho) => Ok(rho),
        Err(Error::InvalidState(msg)) => {
            let min = hermitian_eigendecompose(&h)?.eigenvalues[0];
            if min < -PSD_SLACK {
                Err(Error::PositivityViolation { min_eigenvalue: min })
            } else {
                Err(Error::InvalidState(msg))
            }
        }
        Err(e) => Err(e),
    }
}

/// `rho -> sum_i p_i U_i^dagger rho U_i`, evaluated directly.
pub fn incoherent_sum(ens: &UnitaryEnsemble, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let n = rho.dim();
    if ens.dim() != n {
        return Err(Error::InvalidEnsemble(format!(
            "ensemble of dimension {} for a state of dimension {n}",
            ens.dim()
        )));
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for (p, u) in ens.terms() {
        let term = u.adjoint().matmul(rho.matrix())?.matmul(u)?;
        out = out.lin_comb(1.0, &term, p);
    }
    finish_state(out, rho.bipartition())
}
