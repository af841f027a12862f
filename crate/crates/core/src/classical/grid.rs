//! Sampled continuum densities, box partitions and box-averaging.

use super::distribution::{entropy_term, shannon_entropy, ProbabilityVector};
use crate::error::{Error, Result};

/// Riemann-sum normalization tolerance of a [`GridDensity`].
pub const GRID_NORMALIZATION_TOL: f64 = 1e-9;
/// Tolerance of the internal rho*-invariance check in [`box_hidden_information`].
pub const RHO_STAR_INVARIANCE_TOL: f64 = 1e-9;

/// A probability density sampled on a regular 1-, 2- or 3-dimensional grid.
///
/// Cells are stored row-major (last axis fastest). `values` are densities
/// (per unit volume); `rho_star` is the reference density that fixes the
/// zero of the continuum entropy.
#[derive(Clone, Debug, PartialEq)]
pub struct GridDensity {
    shape: Vec<usize>,
    spacing: Vec<f64>,
    values: Vec<f64>,
    rho_star: f64,
}

fn check_geometry(shape: &[usize], spacing: &[f64]) -> Result<()> {
    if shape.is_empty() || shape.len() > 3 {
        return Err(Error::InvalidDensity(format!(
            "grids have 1 to 3 axes, got {}",
            shape.len()
        )));
    }
    if spacing.len() != shape.len() {
        return Err(Error::InvalidDensity(
            "one spacing per axis is required".into(),
        ));
    }
    if shape.contains(&0) {
        return Err(Error::InvalidDensity("empty axis".into()));
    }
    if spacing.iter().any(|h| !(*h > 0.0) || !h.is_finite()) {
        return Err(Error::InvalidDensity("spacing must be positive".into()));
    }
    Ok(())
}

impl GridDensity {
    pub fn new(shape: Vec<usize>, spacing: Vec<f64>, values: Vec<f64>, rho_star: f64) -> Result<Self> {
        check_geometry(&shape, &spacing)?;
        let cells: usize = shape.iter().product();
        if values.len() != cells {
            return Err(Error::InvalidDensity(format!(
                "{} values for {cells} cells",
                values.len()
            )));
        }
        if !(rho_star > 0.0) || !rho_star.is_finite() {
            return Err(Error::InvalidDensity(format!(
                "reference density must be positive, got {rho_star}"
            )));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidDensity(format!(
                "cell {i} has density {v}"
            )));
        }
        let grid = Self {
            shape,
            spacing,
            values,
            rho_star,
        };
        let mass = grid.total_mass();
        if (mass - 1.0).abs() > GRID_NORMALIZATION_TOL {
            return Err(Error::InvalidDensity(format!("total mass is {mass}")));
        }
        Ok(grid)
    }

    /// Normalizes non-negative cell weights into a density.
    pub fn from_weights(shape: Vec<usize>, spacing: Vec<f64>, weights: Vec<f64>, rho_star: f64) -> Result<Self> {
        check_geometry(&shape, &spacing)?;
        let cell_volume: f64 = spacing.iter().product();
        let total: f64 = weights.iter().sum::<f64>() * cell_volume;
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidDensity(format!("weights integrate to {total}")));
        }
        let values = weights.into_iter().map(|w| w / total).collect();
        Self::new(shape, spacing, values, rho_star)
    }

    /// Evaluates `f` at cell centres (origin at the grid corner) and normalizes.
    pub fn from_fn(
        shape: Vec<usize>,
        spacing: Vec<f64>,
        rho_star: f64,
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        check_geometry(&shape, &spacing)?;
        let cells: usize = shape.iter().product();
        let mut centre = vec![0.0; shape.len()];
        let weights = (0..cells)
            .map(|c| {
                for (axis, idx) in unravel(&shape, c).into_iter().enumerate() {
                    centre[axis] = (idx as f64 + 0.5) * spacing[axis];
                }
                f(&centre)
            })
            .collect();
        Self::from_weights(shape, spacing, weights, rho_star)
    }

    pub fn uniform(shape: Vec<usize>, spacing: Vec<f64>, rho_star: f64) -> Result<Self> {
        let cells: usize = shape.iter().product();
        Self::from_weights(shape, spacing, vec![1.0; cells], rho_star)
    }

    /// All mass in the single cell `cell`.
    pub fn spike(shape: Vec<usize>, spacing: Vec<f64>, cell: usize, rho_star: f64) -> Result<Self> {
        let cells: usize = shape.iter().product();
        if cell >= cells {
            return Err(Error::InvalidDensity(format!("spike cell {cell} of {cells}")));
        }
        let mut w = vec![0.0; cells];
        w[cell] = 1.0;
        Self::from_weights(shape, spacing, w, rho_star)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rho_star(&self) -> f64 {
        self.rho_star
    }

    pub fn dims(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn total_volume(&self) -> f64 {
        self.cell_volume() * self.len() as f64
    }

    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_volume()
    }

    /// Same density, reference density replaced.
    pub fn with_rho_star(&self, rho_star: f64) -> Result<Self> {
        Self::new(self.shape.clone(), self.spacing.clone(), self.values.clone(), rho_star)
    }

    /// Same geometry and reference density, new values. Mass is validated.
    pub(crate) fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.shape.clone(), self.spacing.clone(), values, self.rho_star)
    }

    /// Cell centre of the flat index `cell`.
    pub fn cell_centre(&self, cell: usize) -> Vec<f64> {
        unravel(&self.shape, cell)
            .into_iter()
            .zip(&self.spacing)
            .map(|(i, h)| (i as f64 + 0.5) * h)
            .collect()
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        strides(&self.shape)
    }
}

pub(crate) fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for axis in (0..shape.len().saturating_sub(1)).rev() {
        s[axis] = s[axis + 1] * shape[axis + 1];
    }
    s
}

pub(crate) fn unravel(shape: &[usize], mut cell: usize) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for axis in (0..shape.len()).rev() {
        idx[axis] = cell % shape[axis];
        cell /= shape[axis];
    }
    idx
}

/// Continuum entropy `-sum rho ln(rho / rho*) dV`, relative to `rho*`.
///
/// Empty cells contribute nothing. The value may be negative.
pub fn continuum_entropy(rho: &GridDensity) -> f64 {
    let dv = rho.cell_volume();
    let rs = rho.rho_star;
    rho.values
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| -v * (v / rs).ln())
        .sum::<f64>()
        * dv
}

/// A labelling of grid cells into disjoint boxes `B_0 .. B_{k-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxPartition {
    assignment: Vec<usize>,
    volumes: Vec<f64>,
    cell_volume: f64,
}

impl BoxPartition {
    /// Every label in `0..k` must own at least one cell.
    pub fn new(assignment: Vec<usize>, cell_volume: f64) -> Result<Self> {
        if assignment.is_empty() {
            return Err(Error::PartitionMismatch("no cells".into()));
        }
        if !(cell_volume > 0.0) || !cell_volume.is_finite() {
            return Err(Error::PartitionMismatch("cell volume must be positive".into()));
        }
        let boxes = assignment.iter().max().map_or(0, |m| m + 1);
        let mut counts = vec![0usize; boxes];
        for &label in &assignment {
            counts[label] += 1;
        }
        if let Some(empty) = counts.iter().position(|&c| c == 0) {
            return Err(Error::PartitionMismatch(format!("box {empty} has no cells")));
        }
        let volumes = counts.iter().map(|&c| c as f64 * cell_volume).collect();
        Ok(Self {
            assignment,
            volumes,
            cell_volume,
        })
    }

    /// Partition matching `grid`'s cells built from a labelling function.
    pub fn from_fn(grid: &GridDensity, label: impl Fn(usize) -> usize) -> Result<Self> {
        Self::new((0..grid.len()).map(label).collect(), grid.cell_volume())
    }

    /// `boxes` contiguous slabs along the first axis (sizes differ by at most one slab row).
    pub fn slabs(grid: &GridDensity, boxes: usize) -> Result<Self> {
        let n0 = grid.shape()[0];
        if boxes == 0 || boxes > n0 {
            return Err(Error::PartitionMismatch(format!(
                "{boxes} slabs along an axis of {n0} cells"
            )));
        }
        let stride0 = grid.strides()[0];
        Self::from_fn(grid, |c| (c / stride0) * boxes / n0)
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    pub fn boxes(&self) -> usize {
        self.volumes.len()
    }

    fn check_grid(&self, rho: &GridDensity) -> Result<()> {
        if self.assignment.len() != rho.len() {
            return Err(Error::PartitionMismatch(format!(
                "{} labelled cells for a grid of {}",
                self.assignment.len(),
                rho.len()
            )));
        }
        let dv = rho.cell_volume();
        if ((self.cell_volume - dv) / dv).abs() > 1e-12 {
            return Err(Error::PartitionMismatch(format!(
                "partition cell volume {} differs from grid cell volume {dv}",
                self.cell_volume
            )));
        }
        Ok(())
    }
}

/// `p_i`: the mass of each box.
pub fn box_probabilities(rho: &GridDensity, part: &BoxPartition) -> Result<ProbabilityVector> {
    part.check_grid(rho)?;
    let dv = rho.cell_volume();
    let mut p = vec![0.0; part.boxes()];
    for (&label, &v) in part.assignment.iter().zip(&rho.values) {
        p[label] += v * dv;
    }
    ProbabilityVector::with_tolerance(p, GRID_NORMALIZATION_TOL)
}

/// The box-wise-constant density `p_i / volume(B_i)` on each box.
pub fn boxwise_density(rho: &GridDensity, part: &BoxPartition) -> Result<GridDensity> {
    let p = box_probabilities(rho, part)?;
    let per_box: Vec<f64> = p
        .probs()
        .iter()
        .zip(&part.volumes)
        .map(|(pi, vol)| pi / vol)
        .collect();
    rho.with_values(part.assignment.iter().map(|&l| per_box[l]).collect())
}

/// Probability-weighted geometric mean box volume `prod V_i^{p_i}`.
pub fn geometric_mean_volume(p: &ProbabilityVector, part: &BoxPartition) -> Result<f64> {
    if p.len() != part.boxes() {
        return Err(Error::PartitionMismatch(format!(
            "{} probabilities for {} boxes",
            p.len(),
            part.boxes()
        )));
    }
    let log_mean: f64 = p
        .probs()
        .iter()
        .zip(&part.volumes)
        .map(|(pi, vol)| if *pi > 0.0 { pi * vol.ln() } else { 0.0 })
        .sum();
    Ok(log_mean.exp())
}

fn hidden_information_at(rho: &GridDensity, p: &ProbabilityVector, mean_volume: f64) -> f64 {
    shannon_entropy(p) - continuum_entropy(rho) + (rho.rho_star * mean_volume).ln()
}

/// `S_B - S(rho; rho*) + ln(rho* Vbar)`: the information hidden inside boxes.
///
/// The value does not depend on `rho*`; this is re-checked at `2 rho*` and a
/// discrepancy above [`RHO_STAR_INVARIANCE_TOL`] is a numerical failure.
pub fn box_hidden_information(rho: &GridDensity, part: &BoxPartition) -> Result<f64> {
    let p = box_probabilities(rho, part)?;
    let vbar = geometric_mean_volume(&p, part)?;
    let hidden = hidden_information_at(rho, &p, vbar);
    let doubled = hidden_information_at(&rho.with_rho_star(2.0 * rho.rho_star)?, &p, vbar);
    if (hidden - doubled).abs() > RHO_STAR_INVARIANCE_TOL {
        return Err(Error::NumericalFailure(format!(
            "hidden information changed by {:e} under rho* -> 2 rho*",
            hidden - doubled
        )));
    }
    Ok(hidden)
}

/// Entropy of the boxed density, `S(rho_B) = S_B + ln(rho* Vbar)`, evaluated
/// from the box masses rather than the grid.
pub(crate) fn boxed_entropy_from_masses(p: &ProbabilityVector, part: &BoxPartition, rho_star: f64) -> f64 {
    p.probs()
        .iter()
        .zip(&part.volumes)
        .map(|(&pi, &vol)| entropy_term(pi) + pi * (rho_star * vol).ln())
        .sum()
}
