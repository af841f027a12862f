use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigendecompose, partial_trace, ComplexMatrix, HermitianEigenSystem, Subsystem, C64,
};

/// Hermiticity tolerance of a density matrix.
pub const STATE_HERMITIAN_TOL: f64 = 1e-12;
/// Unit-trace tolerance of a density matrix.
pub const STATE_TRACE_TOL: f64 = 1e-12;
/// Eigenvalues down to `-PSD_SLACK` are accepted as rounding and treated as 0.
pub const PSD_SLACK: f64 = 1e-10;
/// Orthogonality / completeness tolerance of a [`ProjectorBasis`].
pub const BASIS_TOL: f64 = 1e-10;

/// A Hermitian, positive semidefinite, unit-trace matrix, optionally
/// factorized as `H_A (x) H_B` with the A index major.
///
/// The spectrum is computed once at construction.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    bipartition: Option<(usize, usize)>,
    eigen: HermitianEigenSystem,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::build(matrix, None)
    }

    pub fn with_bipartition(matrix: ComplexMatrix, dims: (usize, usize)) -> Result<Self> {
        Self::build(matrix, Some(dims))
    }

    fn build(matrix: ComplexMatrix, bipartition: Option<(usize, usize)>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidState(format!(
                "density matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if let Some((na, nb)) = bipartition {
            if na == 0 || nb == 0 || na * nb != matrix.rows() {
                return Err(Error::InvalidState(format!(
                    "bipartition ({na}, {nb}) does not factor dimension {}",
                    matrix.rows()
                )));
            }
        }
        let defect = matrix.hermitian_defect();
        if defect > STATE_HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {defect:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TRACE_TOL || tr.im.abs() > STATE_TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let eigen = hermitian_eigendecompose(&matrix)?;
        if eigen.eigenvalues[0] < -PSD_SLACK {
            return Err(Error::InvalidState(format!(
                "smallest eigenvalue {:e} is negative",
                eigen.eigenvalues[0]
            )));
        }
        Ok(Self {
            matrix,
            bipartition,
            eigen,
        })
    }

    /// Symmetrizes away rounding before validating; used for the outputs of
    /// composed maps.
    pub(crate) fn from_computed(matrix: ComplexMatrix, bipartition: Option<(usize, usize)>) -> Result<Self> {
        Self::build(matrix.hermitian_part(), bipartition)
    }

    /// `|psi><psi|` for a non-zero vector (normalized here).
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("state vector has zero norm".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::from_computed(ComplexMatrix::outer(&v, &v), None)
    }

    /// Computational basis state `|k><k|` of dimension `n`.
    pub fn basis_state(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidState(format!("basis index {k} of {n}")));
        }
        Self::new(ComplexMatrix::unit(n, k, k))
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidState("dimension 0".into()));
        }
        Self::new(ComplexMatrix::identity(n).scale(1.0 / n as f64))
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diag(diag))
    }

    /// `|Phi+> = (|00> + |11>) / sqrt 2` with bipartition `(2, 2)`.
    pub fn bell() -> Self {
        let s = 0.5f64.sqrt();
        let phi = [C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)];
        Self::pure(&phi)
            .and_then(|p| p.into_bipartite((2, 2)))
            .expect("Bell state is valid")
    }

    /// Same matrix, now factorized as `dims`.
    pub fn into_bipartite(self, dims: (usize, usize)) -> Result<Self> {
        let (na, nb) = dims;
        if na == 0 || nb == 0 || na * nb != self.dim() {
            return Err(Error::InvalidState(format!(
                "bipartition ({na}, {nb}) does not factor dimension {}",
                self.dim()
            )));
        }
        Ok(Self {
            bipartition: Some(dims),
            ..self
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn bipartition(&self) -> Option<(usize, usize)> {
        self.bipartition
    }

    pub(crate) fn require_bipartition(&self) -> Result<(usize, usize)> {
        self.bipartition.ok_or(Error::NoBipartition)
    }

    /// Ascending eigenvalues (may include rounding-level negatives).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.eigenvalues
    }

    pub fn eigensystem(&self) -> &HermitianEigenSystem {
        &self.eigen
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigen.eigenvalues[0]
    }

    /// Reduced state on one factor (`tr_B` for [`Subsystem::A`]).
    pub fn marginal(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let dims = self.require_bipartition()?;
        DensityMatrix::from_computed(partial_trace(&self.matrix, dims, keep)?, None)
    }
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix && self.bipartition == other.bipartition
    }
}

/// A complete set of rank-1 orthogonal projectors: the basis relative to
/// which decoherence is defined.
#[derive(Clone, Debug, PartialEq)]
pub enum ProjectorBasis {
    /// `P_a = |a><a|` in the standard basis.
    Computational(usize),
    Custom(Vec<ComplexMatrix>),
}

impl ProjectorBasis {
    pub fn computational(n: usize) -> Self {
        ProjectorBasis::Computational(n)
    }

    /// Validates `P_a P_b = delta_ab P_b`, `tr P_a = 1` and `sum P_a = I`.
    pub fn from_projectors(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let n = projectors.len();
        if n == 0 {
            return Err(Error::InvalidBasis("no projectors".into()));
        }
        for (a, p) in projectors.iter().enumerate() {
            if p.rows() != n || p.cols() != n {
                return Err(Error::InvalidBasis(format!(
                    "projector {a} is {}x{}, expected {n}x{n}",
                    p.rows(),
                    p.cols()
                )));
            }
            if (p.trace() - C64::new(1.0, 0.0)).norm() > BASIS_TOL {
                return Err(Error::InvalidBasis(format!("tr P_{a} = {}", p.trace())));
            }
        }
        for (a, pa) in projectors.iter().enumerate() {
            for (b, pb) in projectors.iter().enumerate() {
                let prod = pa * pb;
                let expected = if a == b { pb.clone() } else { ComplexMatrix::zeros(n, n) };
                if prod.frobenius_distance(&expected) > BASIS_TOL {
                    return Err(Error::InvalidBasis(format!(
                        "P_{a} P_{b} != delta_ab P_{b}"
                    )));
                }
            }
        }
        let sum = projectors
            .iter()
            .skip(1)
            .fold(projectors[0].clone(), |acc, p| &acc + p);
        if sum.frobenius_distance(&ComplexMatrix::identity(n)) > BASIS_TOL {
            return Err(Error::InvalidBasis("projectors do not sum to I".into()));
        }
        Ok(ProjectorBasis::Custom(projectors))
    }

    /// Projectors onto the columns of a unitary.
    pub fn from_unitary(u: &ComplexMatrix) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::InvalidBasis("basis matrix must be square".into()));
        }
        let projectors = (0..u.cols())
            .map(|k| {
                let v = u.column(k);
                ComplexMatrix::outer(&v, &v)
            })
            .collect();
        Self::from_projectors(projectors)
    }

    pub fn dim(&self) -> usize {
        match self {
            ProjectorBasis::Computational(n) => *n,
            ProjectorBasis::Custom(p) => p.len(),
        }
    }

    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        match self {
            ProjectorBasis::Computational(n) => (0..*n).map(|a| ComplexMatrix::unit(*n, a, a)).collect(),
            ProjectorBasis::Custom(p) => p.clone(),
        }
    }

    /// `sum_a P_a tr(P_a x)`; linear in `x`.
    pub fn dephase(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.dim();
        if x.rows() != n || x.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "basis of dimension {n} against a {}x{} matrix",
                x.rows(),
                x.cols()
            )));
        }
        Ok(match self {
            ProjectorBasis::Computational(_) => ComplexMatrix::from_diag(&x.diagonal()),
            ProjectorBasis::Custom(ps) => {
                let mut out = ComplexMatrix::zeros(n, n);
                for p in ps {
                    let weight = (p * x).trace();
                    out = out.lin_comb(1.0, &p.scale_c(weight), 1.0);
                }
                out
            }
        })
    }
}
