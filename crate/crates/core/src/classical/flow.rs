use super::diffusion::{diffusion_step, DiffusionSpec};
use super::distribution::shannon_entropy;
use super::grid::{
    box_probabilities, boxed_entropy_from_masses, continuum_entropy, geometric_mean_volume,
    BoxPartition, GridDensity,
};
use crate::error::Result;

/// Snapshot of a diffuse-then-box-average run at pseudo-time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalFlowRecord {
    pub step: usize,
    pub t: f64,
    /// `S(rho_t; rho*)`.
    pub continuum_entropy: f64,
    /// `S_B` of the box probabilities.
    pub box_entropy: f64,
    /// `S(rho_{B_t}; rho*) = S_B + ln(rho* Vbar)`.
    pub boxed_entropy: f64,
    pub mean_volume: f64,
    /// `S_B - S(rho_t; rho*) + ln(rho* Vbar)`.
    pub hidden_information: f64,
}

fn record(step: usize, t: f64, rho: &GridDensity, part: &BoxPartition) -> Result<ClassicalFlowRecord> {
    let p = box_probabilities(rho, part)?;
    let vbar = geometric_mean_volume(&p, part)?;
    let continuum = continuum_entropy(rho);
    let sb = shannon_entropy(&p);
    Ok(ClassicalFlowRecord {
        step,
        t,
        continuum_entropy: continuum,
        box_entropy: sb,
        boxed_entropy: boxed_entropy_from_masses(&p, part, rho.rho_star()),
        mean_volume: vbar,
        hidden_information: sb - continuum + (rho.rho_star() * vbar).ln(),
    })
}

/// Diffuses `rho` for `steps` explicit steps and box-averages after each.
///
/// Returns `steps + 1` records, the first at `t = 0`. `boxed_entropy` is
/// non-decreasing along the run; `box_entropy` is too when all boxes have
/// equal volume.
pub fn classical_flow(
    rho: &GridDensity,
    spec: &DiffusionSpec,
    part: &BoxPartition,
    steps: usize,
) -> Result<Vec<ClassicalFlowRecord>> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut state = rho.clone();
    out.push(record(0, 0.0, &state, part)?);
    for k in 1..=steps {
        state = diffusion_step(&state, spec)?;
        out.push(record(k, k as f64 * spec.step, &state, part)?);
    }
    Ok(out)
}
