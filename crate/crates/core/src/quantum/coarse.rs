//! Coarse-graining maps on density matrices.
//!
//! Each public operation validates its output as a [`DensityMatrix`] and keeps
//! the input's bipartition. The `*_kernel` functions are the same maps on raw
//! square matrices; they are linear (except [`reduced_product_kernel`]) and are
//! what the super-scattering closed forms are checked against.

use super::state::{DensityMatrix, ProjectorBasis};
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, tensor_product, ComplexMatrix, Subsystem};

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name, value })
    }
}

/// `(1-s) x + s tr(x) I/N`.
#[cfg(test)]
pub(crate) fn maximal_mix_kernel(x: &ComplexMatrix, s: f64) -> ComplexMatrix {
    let n = x.rows();
    let mixed = ComplexMatrix::identity(n).scale_c(x.trace() / n as f64);
    x.lin_comb(1.0 - s, &mixed, s)
}

/// `tr_B(x) (x) tr_A(x)`. Quadratic in `x`.
pub(crate) fn reduced_product_kernel(x: &ComplexMatrix, dims: (usize, usize)) -> Result<ComplexMatrix> {
    let a = partial_trace(x, dims, Subsystem::A)?;
    let b = partial_trace(x, dims, Subsystem::B)?;
    tensor_product(&a, &b)
}

/// `tr_B(x) (x) I_B / N_B`.
pub(crate) fn partial_maximal_kernel(x: &ComplexMatrix, dims: (usize, usize)) -> Result<ComplexMatrix> {
    let a = partial_trace(x, dims, Subsystem::A)?;
    tensor_product(&a, &ComplexMatrix::identity(dims.1).scale(1.0 / dims.1 as f64))
}

fn finish(rho: &DensityMatrix, out: ComplexMatrix) -> Result<DensityMatrix> {
    DensityMatrix::from_computed(out, rho.bipartition())
}

/// `(1-s) rho + s I/N`; `s = 1` gives the maximally mixed state.
pub fn maximal_mix(rho: &DensityMatrix, s: f64) -> Result<DensityMatrix> {
    check_unit_interval("s", s)?;
    if s == 0.0 {
        return Ok(rho.clone());
    }
    let n = rho.dim();
    let out = rho
        .matrix()
        .lin_comb(1.0 - s, &ComplexMatrix::identity(n), s / n as f64);
    finish(rho, out)
}

/// `rho_A (x) rho_B`; idempotent, and `S = S_A + S_B`.
pub fn reduced_product(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let dims = rho.require_bipartition()?;
    finish(rho, reduced_product_kernel(rho.matrix(), dims)?)
}

/// `(1-s) rho_AB + s rho_A (x) rho_B`.
pub fn tuneable_partial_trace(rho: &DensityMatrix, s: f64) -> Result<DensityMatrix> {
    let dims = rho.require_bipartition()?;
    check_unit_interval("s", s)?;
    if s == 0.0 {
        return Ok(rho.clone());
    }
    let product = reduced_product_kernel(rho.matrix(), dims)?;
    finish(rho, rho.matrix().lin_comb(1.0 - s, &product, s))
}

/// `rho_A (x) I_B / N_B`; `S = S_A + ln N_B`.
pub fn asymmetric_mix(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let dims = rho.require_bipartition()?;
    finish(rho, partial_maximal_kernel(rho.matrix(), dims)?)
}

/// `(1-s) rho_AB + s rho_A (x) I_B / N_B`.
pub fn tuneable_asymmetric_mix(rho: &DensityMatrix, s: f64) -> Result<DensityMatrix> {
    let dims = rho.require_bipartition()?;
    check_unit_interval("s", s)?;
    if s == 0.0 {
        return Ok(rho.clone());
    }
    let target = partial_maximal_kernel(rho.matrix(), dims)?;
    finish(rho, rho.matrix().lin_comb(1.0 - s, &target, s))
}

/// `sum_a P_a tr(P_a rho)`: all off-diagonal elements in `basis` removed.
pub fn decohere_full(rho: &DensityMatrix, basis: &ProjectorBasis) -> Result<DensityMatrix> {
    check_basis(rho, basis)?;
    finish(rho, basis.dephase(rho.matrix())?)
}

/// `(1-s) rho + s rho_D`: off-diagonal elements scaled by `1-s`, the
/// diagonal untouched.
pub fn decohere_partial(rho: &DensityMatrix, basis: &ProjectorBasis, s: f64) -> Result<DensityMatrix> {
    check_basis(rho, basis)?;
    check_unit_interval("s", s)?;
    if s == 0.0 {
        return Ok(rho.clone());
    }
    let out = match basis {
        // Elementwise, so the diagonal is bit-for-bit unchanged.
        ProjectorBasis::Computational(n) => {
            let mut m = rho.matrix().clone();
            for i in 0..*n {
                for j in 0..*n {
                    if i != j {
                        m[(i, j)] *= 1.0 - s;
                    }
                }
            }
            m
        }
        ProjectorBasis::Custom(_) => rho.matrix().lin_comb(1.0 - s, &basis.dephase(rho.matrix())?, s),
    };
    finish(rho, out)
}

fn check_basis(rho: &DensityMatrix, basis: &ProjectorBasis) -> Result<()> {
    if basis.dim() != rho.dim() {
        return Err(Error::InvalidBasis(format!(
            "basis of dimension {} for a state of dimension {}",
            basis.dim(),
            rho.dim()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigendecompose, C64};
    use crate::quantum::{mutual_information, von_neumann_entropy};

    fn binary_entropy(p: f64) -> f64 {
        -(p * p.ln() + (1.0 - p) * (1.0 - p).ln())
    }

    fn plus() -> DensityMatrix {
        let h = 0.5f64.sqrt();
        DensityMatrix::pure(&[C64::new(h, 0.0), C64::new(h, 0.0)]).unwrap()
    }

    #[test]
    fn maximal_mix_examples() {
        let zero = DensityMatrix::basis_state(2, 0).unwrap();
        assert_eq!(maximal_mix(&zero, 0.0).unwrap(), zero);
        let full = maximal_mix(&zero, 1.0).unwrap();
        assert!((von_neumann_entropy(&full) - 2f64.ln()).abs() < 1e-14);
        let half = maximal_mix(&zero, 0.5).unwrap();
        assert!(half.matrix().max_abs_diff(&ComplexMatrix::from_real_diag(&[0.75, 0.25])) < 1e-15);
        assert!((von_neumann_entropy(&half) - binary_entropy(0.25)).abs() < 1e-14);
        assert!(matches!(
            maximal_mix(&zero, 1.5),
            Err(Error::ParameterOutOfRange { name: "s", .. })
        ));
    }

    #[test]
    fn reduced_product_examples() {
        let bell = DensityMatrix::bell();
        let p = reduced_product(&bell).unwrap();
        assert!(p.matrix().max_abs_diff(&ComplexMatrix::identity(4).scale(0.25)) < 1e-15);
        assert!((von_neumann_entropy(&p) - 4f64.ln()).abs() < 1e-14);
        let again = reduced_product(&p).unwrap();
        assert!(again.matrix().max_abs_diff(p.matrix()) < 1e-15);
        assert!(matches!(
            reduced_product(&DensityMatrix::maximally_mixed(4).unwrap()),
            Err(Error::NoBipartition)
        ));
    }

    #[test]
    fn bell_tuneable_partial_trace_half() {
        let bell = DensityMatrix::bell();
        let rho = tuneable_partial_trace(&bell, 0.5).unwrap();
        let eig = hermitian_eigendecompose(rho.matrix()).unwrap().eigenvalues;
        for (got, want) in eig.iter().zip([0.125, 0.125, 0.125, 0.625]) {
            assert!((got - want).abs() < 1e-14);
        }
        let oracle = -(0.625f64 * 0.625f64.ln() + 3.0 * 0.125 * 0.125f64.ln());
        assert!((von_neumann_entropy(&rho) - oracle).abs() < 1e-14);
        assert!((oracle - 1.073543).abs() < 1e-6);
        let asym = tuneable_asymmetric_mix(&bell, 0.5).unwrap();
        assert!(asym.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn tuneable_endpoints() {
        let rho = DensityMatrix::diagonal(&[0.1, 0.2, 0.3, 0.4])
            .unwrap()
            .into_bipartite((2, 2))
            .unwrap();
        let rho = tuneable_partial_trace(&DensityMatrix::bell(), 0.3)
            .map(|b| {
                let m = b.matrix().lin_comb(0.5, rho.matrix(), 0.5);
                DensityMatrix::with_bipartition(m, (2, 2)).unwrap()
            })
            .unwrap();
        assert_eq!(tuneable_partial_trace(&rho, 0.0).unwrap(), rho);
        assert!(tuneable_partial_trace(&rho, 1.0)
            .unwrap()
            .matrix()
            .max_abs_diff(reduced_product(&rho).unwrap().matrix())
            < 1e-15);
        assert!(tuneable_asymmetric_mix(&rho, 1.0)
            .unwrap()
            .matrix()
            .max_abs_diff(asymmetric_mix(&rho).unwrap().matrix())
            < 1e-15);
        assert!(mutual_information(&rho).unwrap() > 0.0);
    }

    #[test]
    fn asymmetric_mix_examples() {
        let rho = DensityMatrix::diagonal(&[0.5, 0.5, 0.0, 0.0])
            .unwrap()
            .into_bipartite((2, 2))
            .unwrap();
        let out = asymmetric_mix(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        assert!((von_neumann_entropy(&out) - 2f64.ln()).abs() < 1e-14);
        let bell = asymmetric_mix(&DensityMatrix::bell()).unwrap();
        assert!(bell.matrix().max_abs_diff(&ComplexMatrix::identity(4).scale(0.25)) < 1e-15);
    }

    #[test]
    fn decoherence_examples() {
        let basis = ProjectorBasis::computational(2);
        let d = decohere_full(&plus(), &basis).unwrap();
        assert!(d.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
        let half = decohere_partial(&plus(), &basis, 0.5).unwrap();
        let expected = ComplexMatrix::from_real(2, 2, &[0.5, 0.25, 0.25, 0.5]).unwrap();
        assert!(half.matrix().max_abs_diff(&expected) < 1e-15);
        assert!((von_neumann_entropy(&half) - binary_entropy(0.25)).abs() < 1e-14);
        assert!(matches!(
            decohere_full(&plus(), &ProjectorBasis::computational(3)),
            Err(Error::InvalidBasis(_))
        ));
    }

    #[test]
    fn decoherence_in_rotated_basis() {
        // |+><+| is already diagonal in the Hadamard basis.
        let h = 0.5f64.sqrt();
        let hadamard = ComplexMatrix::from_real(2, 2, &[h, h, h, -h]).unwrap();
        let basis = ProjectorBasis::from_unitary(&hadamard).unwrap();
        let d = decohere_full(&plus(), &basis).unwrap();
        assert!(d.matrix().max_abs_diff(plus().matrix()) < 1e-15);
        assert!(von_neumann_entropy(&d).abs() < 1e-12);
    }
}
