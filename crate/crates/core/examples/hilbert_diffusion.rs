//! Continuous-time diffusion rho_t = exp(t ($ - 1)) rho.

use entropyflow::linalg::C64;
use entropyflow::quantum::{tuneable_partial_trace, von_neumann_entropy, DensityMatrix, ProjectorBasis};
use entropyflow::sampling::{random_bipartite_state, rng_from_seed};
use entropyflow::superscattering::{
    build_channel, hilbert_diffusion, partial_trace_diffusion, ChannelSpec, DiffusionPropagator,
};

fn main() -> entropyflow::Result<()> {
    let r = 0.5f64.sqrt();
    let plus = DensityMatrix::pure(&[C64::new(r, 0.0), C64::new(r, 0.0)])?;
    let deco = build_channel(&ChannelSpec::FullDecoherence(ProjectorBasis::computational(2)))?;
    let out = hilbert_diffusion(&deco, &plus, 1.0)?;
    let e = (-1.0f64).exp();
    println!("eigenvalues at t = 1: {:?}", out.eigenvalues());
    println!("closed form:          [{}, {}]", 0.5 * (1.0 - e), 0.5 * (1.0 + e));

    let mut rng = rng_from_seed(4);
    let rho = random_bipartite_state(&mut rng, 2, 3)?;
    let chan = build_channel(&ChannelSpec::Maximal { dim: 6, s: 1.0 })?;
    let step = DiffusionPropagator::new(&chan, 0.5)?;
    let mut state = rho.clone();
    for k in 0..=20 {
        if k % 4 == 0 {
            println!("t = {:>4.1}: S = {:.6} (ln 6 = {:.6})", k as f64 * 0.5, von_neumann_entropy(&state), 6f64.ln());
        }
        state = step.apply(&state)?;
    }

    for t in [0.1, 1.0, 5.0] {
        let a = partial_trace_diffusion(&rho, t)?;
        let b = tuneable_partial_trace(&rho, -(-t).exp_m1())?;
        println!("t = {t}: |partial trace diffusion - tuneable| = {:.1e}", a.matrix().max_abs_diff(b.matrix()));
    }
    Ok(())
}
