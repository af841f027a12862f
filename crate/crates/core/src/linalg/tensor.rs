//! Tensor products, partial traces and the row-major vectorization used for
//! superoperators.
//!
//! Bipartite index convention: the composite index of `(a, b)` is
//! `a * n_b + b`, so the first factor varies slowest. `vec` stacks rows:
//! `vec(X)[i * n + j] = X[i][j]`, and under this convention
//! `vec(A X B) = (A (x) B^T) vec(X)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Which tensor factor a partial trace keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product `a (x) b` with `a`'s index major.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut data = vec![ZERO; ar * ac * br * bc];
    let cols = ac * bc;
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    data[(i * br + k) * cols + j * bc + l] = aij * b[(k, l)];
                }
            }
        }
    }
    ComplexMatrix::new(ar * br, cols, data)
}

/// `tr_B` (keep = A) or `tr_A` (keep = B) of a matrix on `H_A (x) H_B`.
pub fn partial_trace(
    ab: &ComplexMatrix,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    let (na, nb) = dims;
    let n = na * nb;
    if na == 0 || nb == 0 || ab.rows() != n || ab.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "partial trace over ({na}, {nb}) needs a {n}x{n} matrix, got {}x{}",
            ab.rows(),
            ab.cols()
        )));
    }
    let out = match keep {
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(na, na);
            for a in 0..na {
                for a2 in 0..na {
                    out[(a, a2)] = (0..nb).map(|b| ab[(a * nb + b, a2 * nb + b)]).sum();
                }
            }
            out
        }
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(nb, nb);
            for b in 0..nb {
                for b2 in 0..nb {
                    out[(b, b2)] = (0..na).map(|a| ab[(a * nb + b, a * nb + b2)]).sum();
                }
            }
            out
        }
    };
    Ok(out)
}

pub fn vectorize(x: &ComplexMatrix) -> Vec<C64> {
    x.as_slice().to_vec()
}

pub fn unvectorize(v: &[C64], n: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::new(n, n, v.to_vec())
}

/// Linearity spot-check tolerance for [`vectorize_superoperator`].
pub const LINEARITY_TOL: f64 = 1e-10;
const LINEARITY_SAMPLES: usize = 4;
const LINEARITY_SEED: u64 = 0x5eed_1ea5;

fn random_matrix(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let data = (0..n * n)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::new(n, n, data).expect("finite by construction")
}

/// Matrix of a linear map on `n x n` matrices acting on row-major `vec`.
///
/// Column `k` is `vec(action(E_k))` with `E_k` the `k`-th matrix unit in
/// row-major order. Linearity is spot-checked on seeded random pairs.
pub fn vectorize_superoperator<F>(n: usize, action: F) -> Result<ComplexMatrix>
where
    F: Fn(&ComplexMatrix) -> ComplexMatrix,
{
    let n2 = n * n;
    let mut rng = ChaCha8Rng::seed_from_u64(LINEARITY_SEED);
    for _ in 0..LINEARITY_SAMPLES {
        let x = random_matrix(n, &mut rng);
        let y = random_matrix(n, &mut rng);
        let alpha: f64 = rng.random_range(-2.0..2.0);
        let beta: f64 = rng.random_range(-2.0..2.0);
        let lhs = action(&x.lin_comb(alpha, &y, beta));
        let rhs = action(&x).lin_comb(alpha, &action(&y), beta);
        if lhs.rows() != n || lhs.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "action maps {n}x{n} to {}x{}",
                lhs.rows(),
                lhs.cols()
            )));
        }
        let defect = lhs.max_abs_diff(&rhs);
        let scale = 1.0 + rhs.frobenius_norm();
        if !(defect <= LINEARITY_TOL * scale) {
            return Err(Error::NonlinearAction { defect });
        }
    }
    let mut data = vec![ZERO; n2 * n2];
    for k in 0..n2 {
        let image = action(&ComplexMatrix::unit(n, k / n, k % n));
        for (r, z) in image.as_slice().iter().enumerate() {
            data[r * n2 + k] = *z;
        }
    }
    ComplexMatrix::new(n2, n2, data)
}
