//! Seeded random inputs: states, unitaries, distributions, grid densities
//! and partitions. Everything is driven by ChaCha8 so a seed reproduces the
//! same sample on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::classical::{BoxPartition, GridDensity, ProbabilityVector};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::quantum::DensityMatrix;

pub type SampleRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    ComplexMatrix::new(rows, cols, data).expect("finite Gaussian samples")
}

/// `G G^dagger / tr` for an `n x rank` complex Gaussian `G`. With
/// `rank == n` the state has full support almost surely.
pub fn random_density_matrix_with_rank(rng: &mut impl Rng, n: usize, rank: usize) -> Result<DensityMatrix> {
    if n == 0 || rank == 0 || rank > n {
        return Err(Error::InvalidState(format!("rank {rank} in dimension {n}")));
    }
    let g = ginibre(rng, n, rank);
    let w = g.matmul(&g.adjoint())?;
    let tr = w.trace().re;
    DensityMatrix::from_computed(w.scale(1.0 / tr), None)
}

pub fn random_density_matrix(rng: &mut impl Rng, n: usize) -> Result<DensityMatrix> {
    random_density_matrix_with_rank(rng, n, n)
}

pub fn random_bipartite_state(rng: &mut impl Rng, na: usize, nb: usize) -> Result<DensityMatrix> {
    random_density_matrix(rng, na * nb)?.into_bipartite((na, nb))
}

pub fn random_pure_state(rng: &mut impl Rng, n: usize) -> Result<DensityMatrix> {
    let psi: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
    DensityMatrix::pure(&psi)
}

/// Gram-Schmidt on the columns of a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        // Two passes keep the columns orthogonal to rounding level.
        for _ in 0..2 {
            for q in &cols {
                let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, z) in c.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    u
}

/// Exponential weights, normalized (a flat Dirichlet draw).
pub fn random_probability_vector(rng: &mut impl Rng, n: usize) -> Result<ProbabilityVector> {
    let w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = w.iter().sum();
    ProbabilityVector::with_tolerance(w.iter().map(|x| x / total).collect(), 1e-12)
}

/// Log-normal cell weights with roughly one cell in ten set to zero.
pub fn random_grid_density(
    rng: &mut impl Rng,
    shape: Vec<usize>,
    spacing: Vec<f64>,
    rho_star: f64,
) -> Result<GridDensity> {
    let cells: usize = shape.iter().product();
    let mut w: Vec<f64> = (0..cells)
        .map(|_| {
            if rng.random_bool(0.1) {
                0.0
            } else {
                rng.sample::<f64, _>(StandardNormal).exp()
            }
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    GridDensity::from_weights(shape, spacing, w, rho_star)
}

/// Random labelling of `grid`'s cells into `boxes` non-empty boxes.
pub fn random_partition(rng: &mut impl Rng, grid: &GridDensity, boxes: usize) -> Result<BoxPartition> {
    let n = grid.len();
    if boxes == 0 || boxes > n {
        return Err(Error::PartitionMismatch(format!("{boxes} boxes over {n} cells")));
    }
    let mut labels: Vec<usize> = (0..n)
        .map(|c| if c < boxes { c } else { rng.random_range(0..boxes) })
        .collect();
    labels.shuffle(rng);
    BoxPartition::new(labels, grid.cell_volume())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_reproduce() {
        let a = random_density_matrix(&mut rng_from_seed(7), 4).unwrap();
        let b = random_density_matrix(&mut rng_from_seed(7), 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unitary_is_unitary() {
        let u = random_unitary(&mut rng_from_seed(1), 6);
        let prod = u.adjoint().matmul(&u).unwrap();
        assert!(prod.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-13);
    }

    #[test]
    fn rank_is_respected() {
        let rho = random_density_matrix_with_rank(&mut rng_from_seed(3), 5, 2).unwrap();
        let ev = rho.eigenvalues();
        assert!(ev[..3].iter().all(|l| l.abs() < 1e-12));
        assert!(ev[3] > 1e-6);
    }

    #[test]
    fn partitions_cover_all_boxes() {
        let mut rng = rng_from_seed(11);
        let g = random_grid_density(&mut rng, vec![5, 4], vec![0.2, 0.25], 1.0).unwrap();
        let p = random_partition(&mut rng, &g, 7).unwrap();
        assert_eq!(p.boxes(), 7);
        assert!((g.total_mass() - 1.0).abs() < 1e-12);
    }
}
