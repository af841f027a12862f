//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and
//! spectral matrix functions built on top of it.

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Symmetry tolerance accepted on input, `max |A_ij - conj(A_ji)|`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Sweeps stop once the off-diagonal Frobenius norm drops below this
/// fraction of `||A||_F`.
pub const JACOBI_REL_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues below this floor are clamped before taking a logarithm.
pub const LOG_CLAMP: f64 = 1e-15;

/// Eigenvalues in ascending order with the matching unitary matrix of
/// eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenSystem {
    /// `V diag(f(lambda)) V^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for (k, &w) in fl.iter().enumerate() {
                    if w != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * w;
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)] = C64::new(out[(i, i)].re, 0.0);
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Decomposes a Hermitian matrix as `A = V diag(lambda) V^dagger`.
pub fn hermitian_eigendecompose(a: &ComplexMatrix) -> Result<HermitianEigenSystem> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = a.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }

    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let target = JACOBI_REL_TOL * scale;

    let mut converged = n == 1 || off_diagonal_norm(&m) <= target;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        converged = off_diagonal_norm(&m) <= target;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, new)] = v[(r, old)];
        }
    }
    Ok(HermitianEigenSystem {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// One complex Jacobi rotation annihilating `m[p][q]`.
///
/// The rotation is `J = diag(1, e^{-i phi}) R` on the `(p, q)` plane, where
/// `phi = arg m[p][q]` makes the pivot real and `R` is the classical real
/// rotation. `m <- J^dagger m J`, `v <- v J`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Skip pivots below rounding relative to the diagonal.
    if r < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[(p, q)] = ZERO;
        m[(q, p)] = ZERO;
        return;
    }
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = m.rows();
    // Columns: m <- m J.
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * jpp + mkq * jqp;
        m[(k, q)] = mkp * jpq + mkq * jqq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
    // Rows: m <- J^dagger m.
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = jpp.conj() * mpk + jqp.conj() * mqk;
        m[(q, k)] = jpq.conj() * mpk + jqq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
}

/// `V f(Lambda) V^dagger` for Hermitian `a`.
///
/// Fails with [`Error::DomainError`] if `f` is not finite on some eigenvalue.
pub fn matrix_function(a: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigendecompose(a)?;
    if let Some(&bad) = eig.eigenvalues.iter().find(|&&l| !f(l).is_finite()) {
        return Err(Error::DomainError { eigenvalue: bad });
    }
    Ok(eig.reconstruct_with(f))
}

/// Natural logarithm with eigenvalues below [`LOG_CLAMP`] clamped to it.
pub fn matrix_log_clamped(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    matrix_function(a, |l| l.max(LOG_CLAMP).ln())
}

/// `-sum l ln l` over a spectrum with `0 ln 0 = 0`; values below the clamp
/// floor (including small negative rounding) contribute nothing.
pub fn spectral_entropy(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l >= LOG_CLAMP)
        .map(|&l| -l * l.ln())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn identity_and_diagonal() {
        let e = hermitian_eigendecompose(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
        let e = hermitian_eigendecompose(&ComplexMatrix::from_real_diag(&[3.0, -1.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 3.0]);
    }

    #[test]
    fn pauli_x_roots_of_characteristic_polynomial() {
        // lambda^2 - 1 = 0.
        let e = hermitian_eigendecompose(&pauli_x()).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complex_hermitian_pauli_y() {
        let y = ComplexMatrix::new(
            2,
            2,
            vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO],
        )
        .unwrap();
        let e = hermitian_eigendecompose(&y).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!(e.reconstruct().max_abs_diff(&y) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let a = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            hermitian_eigendecompose(&a),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            hermitian_eigendecompose(&ComplexMatrix::zeros(2, 3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn matrix_function_examples() {
        let z = ComplexMatrix::zeros(2, 2);
        let e = matrix_function(&z, f64::exp).unwrap();
        assert!(e.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);

        let d = ComplexMatrix::from_real_diag(&[std::f64::consts::E, std::f64::consts::E.powi(2)]);
        let l = matrix_function(&d, f64::ln).unwrap();
        assert!(l.max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 2.0])) < 1e-14);

        let (ch, sh) = (1f64.cosh(), 1f64.sinh());
        let ex = matrix_function(&pauli_x(), f64::exp).unwrap();
        let expected = ComplexMatrix::from_real(2, 2, &[ch, sh, sh, ch]).unwrap();
        assert!(ex.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn log_domain_error_without_clamp() {
        let d = ComplexMatrix::from_real_diag(&[-1.0, 1.0]);
        assert!(matches!(
            matrix_function(&d, f64::ln),
            Err(Error::DomainError { .. })
        ));
        let clamped = matrix_log_clamped(&ComplexMatrix::from_real_diag(&[0.0, 1.0])).unwrap();
        assert!((clamped[(0, 0)].re - LOG_CLAMP.ln()).abs() < 1e-12);
    }

    #[test]
    fn spectral_entropy_convention() {
        assert_eq!(spectral_entropy(&[1.0, 0.0, -1e-17]), 0.0);
        assert!((spectral_entropy(&[0.5, 0.5]) - 2f64.ln()).abs() < 1e-15);
    }
}
