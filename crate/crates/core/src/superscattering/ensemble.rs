use crate::classical::ProbabilityVector;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Unitarity tolerance `||U^dagger U - I||_max`.
pub const UNITARY_TOL: f64 = 1e-10;

/// Weighted unitaries `{(p_i, U_i)}` defining `rho -> sum p_i U_i^dagger rho U_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryEnsemble {
    weights: ProbabilityVector,
    unitaries: Vec<ComplexMatrix>,
}

impl UnitaryEnsemble {
    pub fn new(weights: ProbabilityVector, unitaries: Vec<ComplexMatrix>) -> Result<Self> {
        if weights.len() != unitaries.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} weights for {} unitaries",
                weights.len(),
                unitaries.len()
            )));
        }
        let n = unitaries[0].rows();
        for (i, u) in unitaries.iter().enumerate() {
            if u.rows() != n || u.cols() != n {
                return Err(Error::InvalidEnsemble(format!(
                    "U_{i} is {}x{}, expected {n}x{n}",
                    u.rows(),
                    u.cols()
                )));
            }
            let defect = u.adjoint().matmul(u)?.max_abs_diff(&ComplexMatrix::identity(n));
            if defect > UNITARY_TOL {
                return Err(Error::InvalidEnsemble(format!(
                    "U_{i} is not unitary (defect {defect:e})"
                )));
            }
        }
        Ok(Self { weights, unitaries })
    }

    /// A single unitary with weight 1.
    pub fn single(u: ComplexMatrix) -> Result<Self> {
        Self::new(ProbabilityVector::uniform(1)?, vec![u])
    }

    /// Equal-weight average of several ensembles of the same dimension: the
    /// ensemble of `<sum p_i U_i^dagger rho U_i>` over the list.
    pub fn average(ensembles: &[UnitaryEnsemble]) -> Result<Self> {
        let first = ensembles
            .first()
            .ok_or_else(|| Error::InvalidEnsemble("no ensembles to average".into()))?;
        let m = ensembles.len() as f64;
        let mut weights = Vec::new();
        let mut unitaries = Vec::new();
        for e in ensembles {
            if e.dim() != first.dim() {
                return Err(Error::InvalidEnsemble(format!(
                    "ensembles of dimension {} and {}",
                    first.dim(),
                    e.dim()
                )));
            }
            weights.extend(e.weights.probs().iter().map(|p| p / m));
            unitaries.extend(e.unitaries.iter().cloned());
        }
        Self::new(ProbabilityVector::with_tolerance(weights, 1e-12)?, unitaries)
    }

    pub fn dim(&self) -> usize {
        self.unitaries[0].rows()
    }

    pub fn weights(&self) -> &ProbabilityVector {
        &self.weights
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (f64, &ComplexMatrix)> {
        self.weights.probs().iter().copied().zip(&self.unitaries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unitary() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(UnitaryEnsemble::single(m), Err(Error::InvalidEnsemble(_))));
        let w = ProbabilityVector::uniform(2).unwrap();
        assert!(UnitaryEnsemble::new(w, vec![ComplexMatrix::identity(2)]).is_err());
    }

    #[test]
    fn average_weights() {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let a = UnitaryEnsemble::single(ComplexMatrix::identity(2)).unwrap();
        let b = UnitaryEnsemble::new(
            ProbabilityVector::new(vec![0.25, 0.75]).unwrap(),
            vec![ComplexMatrix::identity(2), x],
        )
        .unwrap();
        let avg = UnitaryEnsemble::average(&[a, b]).unwrap();
        assert_eq!(avg.len(), 3);
        assert_eq!(avg.weights().probs(), &[0.5, 0.125, 0.375]);
    }
}
