use super::state::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{spectral_entropy, Subsystem, LOG_CLAMP};

/// Weight of `rho` outside `sigma`'s support above which relative entropy is
/// reported as infinite.
pub const SUPPORT_TOL: f64 = 1e-8;

/// `-tr(rho ln rho)` in nats. Eigenvalues below the log clamp count as 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    // Eigenvalues a few ulps above 1 give -1e-16 for pure states.
    let s = spectral_entropy(rho.eigenvalues());
    if s > 0.0 { s } else { 0.0 }
}

/// `tr(rho [ln rho - ln sigma])`, evaluated in `sigma`'s eigenbasis.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let n = rho.dim();
    if sigma.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy of dimension {n} against {}",
            sigma.dim()
        )));
    }
    let es = sigma.eigensystem();
    let r = rho.matrix();
    let mut cross = 0.0;
    let mut outside = 0.0;
    for (k, &lambda) in es.eigenvalues.iter().enumerate() {
        let v = es.eigenvectors.column(k);
        let rv = r.apply_vec(&v)?;
        let weight: f64 = v.iter().zip(&rv).map(|(a, b)| (a.conj() * b).re).sum();
        if lambda < LOG_CLAMP {
            outside += weight;
        }
        cross += weight * lambda.max(LOG_CLAMP).ln();
    }
    if outside >= SUPPORT_TOL {
        return Err(Error::SupportMismatch { weight: outside });
    }
    Ok(-von_neumann_entropy(rho) - cross)
}

/// `S_A`, `S_B` and `S_AB` of a bipartite state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BipartiteEntropies {
    pub a: f64,
    pub b: f64,
    pub joint: f64,
}

impl BipartiteEntropies {
    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        Ok(Self {
            a: von_neumann_entropy(&rho.marginal(Subsystem::A)?),
            b: von_neumann_entropy(&rho.marginal(Subsystem::B)?),
            joint: von_neumann_entropy(rho),
        })
    }

    pub fn mutual_information(&self) -> f64 {
        self.a + self.b - self.joint
    }
}

/// `S_A + S_B - S_AB`.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    Ok(BipartiteEntropies::of(rho)?.mutual_information())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;

    #[test]
    fn entropy_examples() {
        let pure = DensityMatrix::basis_state(3, 1).unwrap();
        assert!(von_neumann_entropy(&pure).abs() < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(5).unwrap();
        assert!((von_neumann_entropy(&mixed) - 5f64.ln()).abs() < 1e-14);
        let d = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        let oracle = -(0.25f64 * 0.25f64.ln() + 0.75 * 0.75f64.ln());
        assert!((von_neumann_entropy(&d) - oracle).abs() < 1e-15);
        assert!((oracle - 0.562335).abs() < 1e-6);
        assert!(von_neumann_entropy(&DensityMatrix::bell()).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_examples() {
        let d = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        assert!(relative_entropy(&d, &d).unwrap().abs() < 1e-14);
        let zero = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let half = DensityMatrix::maximally_mixed(2).unwrap();
        assert!((relative_entropy(&zero, &half).unwrap() - 2f64.ln()).abs() < 1e-14);
        assert!(matches!(
            relative_entropy(&half, &zero),
            Err(Error::SupportMismatch { .. })
        ));
        let three = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(matches!(relative_entropy(&half, &three), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn mutual_information_examples() {
        let bell = DensityMatrix::bell();
        assert!((mutual_information(&bell).unwrap() - 4f64.ln()).abs() < 1e-12);
        let classical = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5])
            .unwrap()
            .into_bipartite((2, 2))
            .unwrap();
        assert!((mutual_information(&classical).unwrap() - 2f64.ln()).abs() < 1e-14);
        let product = DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.12, 0.28, 0.18, 0.42]))
            .unwrap()
            .into_bipartite((2, 2))
            .unwrap();
        assert!(mutual_information(&product).unwrap().abs() < 1e-14);
        assert!(matches!(
            mutual_information(&DensityMatrix::maximally_mixed(4).unwrap()),
            Err(Error::NoBipartition)
        ));
    }
}
