//! Spike-to-uniform diffusion on a 1D grid, then a 2D anisotropic run
//! coarse-grained into boxes along the way.

use entropyflow::classical::{
    classical_flow, continuum_entropy, diffusion_entropy_rate, diffusion_step, BoxPartition,
    DiffusionSpec, GridDensity, Tensor3, TensorField,
};
use std::sync::Arc;

fn main() -> entropyflow::Result<()> {
    let n = 101;
    let h = 1.0 / n as f64;
    let mut rho = GridDensity::spike(vec![n], vec![h], n / 2, 1.0)?;
    let spec = DiffusionSpec::simple(1.0, DiffusionSpec::max_stable_step(&rho, 1.0));
    let uniform = continuum_entropy(&GridDensity::uniform(vec![n], vec![h], 1.0)?);
    println!("dt = {:e}, uniform entropy = {uniform:.6}", spec.step);
    for k in 0..=20_000 {
        if k % 4000 == 0 {
            println!(
                "step {k:>6}: S = {:>10.6}  gap to uniform = {:.3e}  mass = {:.15}",
                continuum_entropy(&rho),
                uniform - continuum_entropy(&rho),
                rho.total_mass()
            );
        }
        rho = diffusion_step(&rho, &spec)?;
    }
    println!("entropy rate at the end: {:.3e}", diffusion_entropy_rate(&rho, &spec)?);

    // 2D with a constant off-diagonal diffusivity. Cross terms can push
    // near-empty cells negative, so the bump sits on a background.
    let shape = vec![24, 24];
    let spacing = vec![1.0 / 24.0; 2];
    let rho = GridDensity::from_fn(shape.clone(), spacing, 1.0, |x| {
        (-((x[0] - 0.5).powi(2) + (x[1] - 0.5).powi(2)) / 0.004).exp() + 0.05
    })?;
    let sigma: Tensor3 = [[1.0, 0.3, 0.0], [0.3, 0.5, 0.0], [0.0, 0.0, 1.0]];
    let field: TensorField = Arc::new(move |_x, _rho| sigma);
    let step = 0.2 * DiffusionSpec::max_stable_step(&rho, 1.0);
    let spec = DiffusionSpec::generalized(field, step);
    let part = BoxPartition::slabs(&rho, 4)?;
    let records = classical_flow(&rho, &spec, &part, 400)?;
    for r in records.iter().step_by(100) {
        println!(
            "t = {:.5}: S = {:>8.5}  S(rho_B) = {:>8.5}  hidden = {:.5}",
            r.t, r.continuum_entropy, r.boxed_entropy, r.hidden_information
        );
    }
    Ok(())
}
