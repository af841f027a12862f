//! Explicit conservative finite-volume diffusion with reflecting boundaries.
//!
//! The update is written in flux form on cell faces, so every unit of mass
//! that leaves a cell enters its neighbour and boundary faces carry no flux.
//! For a scalar or diagonal diffusivity under the stability bound the update
//! matrix is doubly stochastic, which is what makes the discrete entropy
//! non-decreasing.

use std::fmt;
use std::sync::Arc;

use super::grid::{strides, unravel, GridDensity};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigendecompose, ComplexMatrix};

/// Symmetry tolerance for tensor diffusivities.
pub const TENSOR_SYMMETRY_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a tensor diffusivity.
pub const TENSOR_PSD_TOL: f64 = -1e-12;
/// Cells may dip this far below zero from rounding; they are reset to 0.
pub const NEGATIVITY_SLACK: f64 = 1e-15;
/// Face densities below this are treated as empty in the entropy rate.
pub const RATE_DENSITY_FLOOR: f64 = 1e-15;
pub const RATE_GRADIENT_FLOOR: f64 = 1e-12;

/// 3x3 symmetric diffusion tensor; only the leading `dims x dims` block is used.
pub type Tensor3 = [[f64; 3]; 3];

/// `sigma^{ij}(x, rho(x))`, evaluated at cell centres.
pub type TensorField = Arc<dyn Fn(&[f64], f64) -> Tensor3 + Send + Sync>;

#[derive(Clone)]
pub enum Diffusivity {
    /// Constant scalar `sigma > 0`: `d rho/dt = sigma lap rho`.
    Simple(f64),
    /// Position-, direction- and density-dependent tensor:
    /// `d rho/dt = d_i(sigma^{ij} d_j rho)`.
    Generalized(TensorField),
}

impl fmt::Debug for Diffusivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diffusivity::Simple(s) => f.debug_tuple("Simple").field(s).finish(),
            Diffusivity::Generalized(_) => f.write_str("Generalized(..)"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Boundary {
    /// Zero flux through the outer faces.
    #[default]
    Reflecting,
}

#[derive(Clone, Debug)]
pub struct DiffusionSpec {
    pub diffusivity: Diffusivity,
    /// Pseudo-time increment of one explicit step.
    pub step: f64,
    pub boundary: Boundary,
}

impl DiffusionSpec {
    pub fn simple(sigma: f64, step: f64) -> Self {
        Self {
            diffusivity: Diffusivity::Simple(sigma),
            step,
            boundary: Boundary::Reflecting,
        }
    }

    pub fn generalized(field: TensorField, step: f64) -> Self {
        Self {
            diffusivity: Diffusivity::Generalized(field),
            step,
            boundary: Boundary::Reflecting,
        }
    }

    /// Largest step accepted on `grid` for a scalar diffusivity `sigma`.
    pub fn max_stable_step(grid: &GridDensity, sigma: f64) -> f64 {
        1.0 / (sigma * grid.spacing().iter().map(|h| 2.0 / (h * h)).sum::<f64>())
    }
}

/// Diffusivity evaluated on every cell.
enum Field {
    Scalar(f64),
    Tensor(Vec<Tensor3>),
}

impl Field {
    #[inline]
    fn face(&self, left: usize, right: usize, i: usize, j: usize) -> f64 {
        match self {
            Field::Scalar(s) => {
                if i == j {
                    *s
                } else {
                    0.0
                }
            }
            Field::Tensor(t) => 0.5 * (t[left][i][j] + t[right][i][j]),
        }
    }

    fn has_cross_terms(&self) -> bool {
        matches!(self, Field::Tensor(_))
    }
}

fn evaluate_field(rho: &GridDensity, spec: &DiffusionSpec) -> Result<(Field, f64)> {
    if !(spec.step > 0.0) || !spec.step.is_finite() {
        return Err(Error::UnstableStep(format!(
            "step must be positive, got {}",
            spec.step
        )));
    }
    match &spec.diffusivity {
        Diffusivity::Simple(s) => {
            if !(*s > 0.0) || !s.is_finite() {
                return Err(Error::InvalidDensity(format!(
                    "diffusion constant must be positive, got {s}"
                )));
            }
            Ok((Field::Scalar(*s), *s))
        }
        Diffusivity::Generalized(f) => {
            let d = rho.dims();
            let mut max_eig = 0.0f64;
            let mut tensors = Vec::with_capacity(rho.len());
            for (cell, &v) in rho.values().iter().enumerate() {
                let t = f(&rho.cell_centre(cell), v);
                let mut block = Vec::with_capacity(d * d);
                for i in 0..d {
                    for j in 0..d {
                        if !t[i][j].is_finite() {
                            return Err(Error::InvalidDensity(format!(
                                "non-finite diffusion tensor at cell {cell}"
                            )));
                        }
                        if (t[i][j] - t[j][i]).abs() > TENSOR_SYMMETRY_TOL {
                            return Err(Error::InvalidDensity(format!(
                                "diffusion tensor not symmetric at cell {cell}"
                            )));
                        }
                        block.push(t[i][j]);
                    }
                }
                let eig = hermitian_eigendecompose(&ComplexMatrix::from_real(d, d, &block)?)?;
                if eig.eigenvalues[0] < TENSOR_PSD_TOL {
                    return Err(Error::InvalidDensity(format!(
                        "diffusion tensor not positive semidefinite at cell {cell} (eigenvalue {})",
                        eig.eigenvalues[0]
                    )));
                }
                max_eig = max_eig.max(eig.eigenvalues[d - 1]);
                tensors.push(t);
            }
            Ok((Field::Tensor(tensors), max_eig))
        }
    }
}

fn check_stability(rho: &GridDensity, spec: &DiffusionSpec, max_sigma: f64) -> Result<()> {
    let bound = spec.step * max_sigma * rho.spacing().iter().map(|h| 2.0 / (h * h)).sum::<f64>();
    if bound > 1.0 + 1e-12 {
        return Err(Error::UnstableStep(format!(
            "step * max sigma * sum(2 / h^2) = {bound} exceeds 1"
        )));
    }
    Ok(())
}

/// Central tangential derivative along `axis` with mirrored ghost cells.
fn central_derivative(rho: &GridDensity, idx: &[usize], stride: &[usize], cell: usize, axis: usize) -> f64 {
    let v = rho.values();
    let n = rho.shape()[axis];
    let h = rho.spacing()[axis];
    let up = if idx[axis] + 1 < n { v[cell + stride[axis]] } else { v[cell] };
    let down = if idx[axis] > 0 { v[cell - stride[axis]] } else { v[cell] };
    (up - down) / (2.0 * h)
}

/// One interior face between `left` and `right = left + stride[axis]`.
struct Face {
    left: usize,
    right: usize,
    axis: usize,
    /// Normal derivative `(rho_R - rho_L) / h`.
    normal: f64,
    /// `sum_{j != axis} sigma^{axis j} d_j rho`, averaged over the two cells.
    cross: f64,
    sigma_nn: f64,
}

fn faces(rho: &GridDensity, field: &Field) -> Vec<Face> {
    let shape = rho.shape();
    let stride = strides(shape);
    let d = shape.len();
    let v = rho.values();
    let mut out = Vec::new();
    for left in 0..rho.len() {
        let idx = unravel(shape, left);
        for axis in 0..d {
            if idx[axis] + 1 >= shape[axis] {
                continue;
            }
            let right = left + stride[axis];
            let h = rho.spacing()[axis];
            let sigma_nn = field.face(left, right, axis, axis);
            let mut cross = 0.0;
            if field.has_cross_terms() {
                let mut ridx = idx.clone();
                ridx[axis] += 1;
                for j in (0..d).filter(|&j| j != axis) {
                    let s = field.face(left, right, axis, j);
                    if s != 0.0 {
                        let t = 0.5
                            * (central_derivative(rho, &idx, &stride, left, j)
                                + central_derivative(rho, &ridx, &stride, right, j));
                        cross += s * t;
                    }
                }
            }
            out.push(Face {
                left,
                right,
                axis,
                normal: (v[right] - v[left]) / h,
                cross,
                sigma_nn,
            });
        }
    }
    out
}

/// One explicit Euler step of (generalized) diffusion.
///
/// Fails with [`Error::UnstableStep`] if the stability bound
/// `step * max sigma * sum_axes 2 / h^2 <= 1` is violated or a cell goes
/// negative (possible only with off-diagonal tensor terms).
pub fn diffusion_step(rho: &GridDensity, spec: &DiffusionSpec) -> Result<GridDensity> {
    let (field, max_sigma) = evaluate_field(rho, spec)?;
    check_stability(rho, spec, max_sigma)?;
    let mut next = rho.values().to_vec();
    for f in faces(rho, &field) {
        let h = rho.spacing()[f.axis];
        let transfer = spec.step * (f.sigma_nn * f.normal + f.cross) / h;
        next[f.left] += transfer;
        next[f.right] -= transfer;
    }
    for (cell, v) in next.iter_mut().enumerate() {
        if *v < 0.0 {
            if *v < -NEGATIVITY_SLACK {
                return Err(Error::UnstableStep(format!(
                    "cell {cell} went negative ({v:e})"
                )));
            }
            *v = 0.0;
        }
    }
    rho.with_values(next)
}

/// Logarithmic mean, the face density for which `g^2 / rho_f` equals
/// `g (ln rho_R - ln rho_L) / h`.
fn log_mean(a: f64, b: f64) -> f64 {
    if a <= 0.0 || b <= 0.0 {
        return 0.0;
    }
    if ((a - b) / (a + b)).abs() < 1e-6 {
        // Series about the midpoint avoids cancellation.
        let m = 0.5 * (a + b);
        let e = (a - b) / (a + b);
        return m * (1.0 - e * e / 3.0);
    }
    (a - b) / (a.ln() - b.ln())
}

/// Quadrature of the entropy production `int sigma^{ij} d_i rho d_j rho / rho`.
///
/// Each face contributes `(sigma^{nn} g_n^2 + sum_j sigma^{nj} g_n g_j) / rho_f`
/// times the cell volume, with `rho_f` the logarithmic mean of the two cells.
/// A face with `rho_f < 1e-15` contributes 0 if its gradient is below 1e-12
/// and is reported as [`Error::UnstableStep`] otherwise.
pub fn diffusion_entropy_rate(rho: &GridDensity, spec: &DiffusionSpec) -> Result<f64> {
    let (field, max_sigma) = evaluate_field(rho, spec)?;
    check_stability(rho, spec, max_sigma)?;
    let v = rho.values();
    let mut total = 0.0;
    for f in faces(rho, &field) {
        let rf = log_mean(v[f.left], v[f.right]);
        if rf < RATE_DENSITY_FLOOR {
            let grad = f.normal.abs().max(f.cross.abs());
            if grad < RATE_GRADIENT_FLOOR {
                continue;
            }
            return Err(Error::UnstableStep(format!(
                "entropy rate singular: empty face between cells {} and {} with gradient {grad:e}",
                f.left, f.right
            )));
        }
        total += (f.sigma_nn * f.normal * f.normal + f.normal * f.cross) / rf;
    }
    Ok(total * rho.cell_volume())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::continuum_entropy;

    fn spike_101() -> GridDensity {
        GridDensity::spike(vec![101], vec![1.0 / 101.0], 50, 1.0).unwrap()
    }

    #[test]
    fn uniform_is_fixed_point() {
        let u = GridDensity::uniform(vec![20], vec![0.05], 1.0).unwrap();
        let spec = DiffusionSpec::simple(1.0, 1e-4);
        let next = diffusion_step(&u, &spec).unwrap();
        for (a, b) in next.values().iter().zip(u.values()) {
            assert!((a - b).abs() < 1e-13);
        }
        assert_eq!(diffusion_entropy_rate(&u, &spec).unwrap(), 0.0);
    }

    #[test]
    fn stability_bound_enforced() {
        let g = spike_101();
        let h = 1.0 / 101.0;
        let ok = DiffusionSpec::simple(1.0, 0.5 * h * h);
        assert!(diffusion_step(&g, &ok).is_ok());
        let bad = DiffusionSpec::simple(1.0, 0.51 * h * h);
        assert!(matches!(diffusion_step(&g, &bad), Err(Error::UnstableStep(_))));
        assert!(matches!(
            diffusion_step(&g, &DiffusionSpec::simple(1.0, -1.0)),
            Err(Error::UnstableStep(_))
        ));
        assert!(diffusion_step(&g, &DiffusionSpec::simple(0.0, 1e-6)).is_err());
    }

    #[test]
    fn spike_entropy_strictly_increases() {
        let spec = DiffusionSpec::simple(1.0, 1e-5);
        let mut rho = spike_101();
        let mut s = continuum_entropy(&rho);
        for _ in 0..1000 {
            rho = diffusion_step(&rho, &spec).unwrap();
            let next = continuum_entropy(&rho);
            assert!(next > s);
            assert!((rho.total_mass() - 1.0).abs() < 1e-12);
            s = next;
        }
    }

    #[test]
    fn rate_is_linear_in_sigma() {
        let rho = GridDensity::from_fn(vec![50], vec![0.02], 1.0, |x| 1.0 + x[0] * x[0]).unwrap();
        let r1 = diffusion_entropy_rate(&rho, &DiffusionSpec::simple(1.0, 1e-5)).unwrap();
        let r2 = diffusion_entropy_rate(&rho, &DiffusionSpec::simple(2.0, 1e-5)).unwrap();
        assert!(r1 > 0.0);
        assert_eq!(r2, 2.0 * r1);
    }

    #[test]
    fn rate_matches_finite_difference_in_time() {
        let mut rho = spike_101();
        let spec = DiffusionSpec::simple(1.0, 1e-5);
        for _ in 0..1000 {
            rho = diffusion_step(&rho, &spec).unwrap();
        }
        let dt = 1e-6;
        let small = DiffusionSpec::simple(1.0, dt);
        let rate = diffusion_entropy_rate(&rho, &small).unwrap();
        let next = diffusion_step(&rho, &small).unwrap();
        let fd = (continuum_entropy(&next) - continuum_entropy(&rho)) / dt;
        assert!(((fd - rate) / rate).abs() < 0.02, "fd {fd} rate {rate}");
    }

    #[test]
    fn rate_flags_empty_face_next_to_mass() {
        let spec = DiffusionSpec::simple(1.0, 1e-6);
        assert!(matches!(
            diffusion_entropy_rate(&spike_101(), &spec),
            Err(Error::UnstableStep(_))
        ));
    }

    #[test]
    fn isotropic_tensor_matches_scalar() {
        let rho = GridDensity::from_fn(vec![8, 9], vec![0.1, 0.15], 1.0, |x| {
            (-(x[0] - 0.4).powi(2) * 20.0 - (x[1] - 0.7).powi(2) * 10.0).exp()
        })
        .unwrap();
        let scalar = DiffusionSpec::simple(0.7, 1e-3);
        let field: TensorField = Arc::new(|_, _| [[0.7, 0.0, 0.0], [0.0, 0.7, 0.0], [0.0, 0.0, 0.7]]);
        let tensor = DiffusionSpec::generalized(field, 1e-3);
        let a = diffusion_step(&rho, &scalar).unwrap();
        let b = diffusion_step(&rho, &tensor).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-13);
        }
        let ra = diffusion_entropy_rate(&rho, &scalar).unwrap();
        let rb = diffusion_entropy_rate(&rho, &tensor).unwrap();
        assert!((ra - rb).abs() < 1e-12 * ra);
    }

    #[test]
    fn density_dependent_diffusivity_conserves_mass_and_raises_entropy() {
        // sigma grows with the local density: a porous-medium style smoother.
        let field: TensorField = Arc::new(|_, rho| {
            let s = 0.1 + 0.05 * rho;
            [[s, 0.0, 0.0], [0.0, s, 0.0], [0.0, 0.0, s]]
        });
        let mut rho = GridDensity::spike(vec![31], vec![0.1], 15, 1.0).unwrap();
        let spec = DiffusionSpec::generalized(field, 1e-3);
        let mut s = continuum_entropy(&rho);
        for _ in 0..200 {
            rho = diffusion_step(&rho, &spec).unwrap();
            assert!((rho.total_mass() - 1.0).abs() < 1e-12);
            let next = continuum_entropy(&rho);
            assert!(next >= s - 1e-12);
            s = next;
        }
    }

    #[test]
    fn invalid_tensors_rejected() {
        let rho = GridDensity::uniform(vec![3, 3], vec![1.0, 1.0], 1.0).unwrap();
        let asym: TensorField = Arc::new(|_, _| [[1.0, 0.2, 0.0], [0.1, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(diffusion_step(&rho, &DiffusionSpec::generalized(asym, 0.01)).is_err());
        let indefinite: TensorField = Arc::new(|_, _| [[1.0, 2.0, 0.0], [2.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(diffusion_step(&rho, &DiffusionSpec::generalized(indefinite, 0.01)).is_err());
    }

    #[test]
    fn anisotropic_cross_terms_conserve_mass() {
        let field: TensorField = Arc::new(|_, _| [[1.0, 0.3, 0.0], [0.3, 0.5, 0.0], [0.0, 0.0, 1.0]]);
        let rho = GridDensity::from_fn(vec![10, 10], vec![0.1, 0.1], 1.0, |x| {
            1.0 + (x[0] * 3.0).sin() * (x[1] * 2.0).cos() * 0.5
        })
        .unwrap();
        let spec = DiffusionSpec::generalized(field, 1e-3);
        let next = diffusion_step(&rho, &spec).unwrap();
        assert!((next.total_mass() - 1.0).abs() < 1e-12);
        assert!(diffusion_entropy_rate(&rho, &spec).unwrap() > 0.0);
    }

    #[test]
    fn three_dimensional_step() {
        let mut w = vec![0.0; 27];
        w[13] = 1.0;
        let rho = GridDensity::from_weights(vec![3, 3, 3], vec![1.0; 3], w, 1.0).unwrap();
        let spec = DiffusionSpec::simple(1.0, 1.0 / 6.0);
        let next = diffusion_step(&rho, &spec).unwrap();
        // Each of the six neighbours receives 1/6 of the centre mass.
        assert!(next.values()[13].abs() < 1e-15);
        assert!((next.values()[12] - 1.0 / 6.0).abs() < 1e-15);
        assert!((next.values()[4] - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn log_mean_limits() {
        assert_eq!(log_mean(0.0, 1.0), 0.0);
        assert!((log_mean(2.0, 2.0) - 2.0).abs() < 1e-15);
        let exact = (3.0 - 1.0) / (3f64.ln() - 1f64.ln());
        assert!((log_mean(3.0, 1.0) - exact).abs() < 1e-15);
        assert!((log_mean(1.0 + 1e-9, 1.0) - (1.0 + 0.5e-9)).abs() < 1e-15);
    }
}
