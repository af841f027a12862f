//! Building the table channels as N^2 x N^2 superoperators and checking
//! them against the direct state operations.

use entropyflow::quantum::{asymmetric_mix, maximal_mix, von_neumann_entropy, ProjectorBasis};
use entropyflow::sampling::{random_bipartite_state, random_unitary, rng_from_seed};
use entropyflow::superscattering::{build_channel, ChannelSpec, SuperScattering, UnitaryEnsemble};

fn main() -> entropyflow::Result<()> {
    let mut rng = rng_from_seed(3);
    let rho = random_bipartite_state(&mut rng, 2, 2)?;
    let n = rho.dim();
    let specs = vec![
        ChannelSpec::Maximal { dim: n, s: 0.4 },
        ChannelSpec::PartialMaximal { dims: (2, 2) },
        ChannelSpec::PartialMaximalTuneable { dims: (2, 2), s: 0.4 },
        ChannelSpec::FullDecoherence(ProjectorBasis::computational(n)),
        ChannelSpec::PartialDecoherence { basis: ProjectorBasis::computational(n), s: 0.4 },
        ChannelSpec::IncoherentSum(UnitaryEnsemble::single(random_unitary(&mut rng, n))?),
    ];
    println!("S(rho) = {:.6}", von_neumann_entropy(&rho));
    for spec in &specs {
        let chan = build_channel(spec)?;
        let out = chan.apply(&rho)?;
        println!(
            "{:<24} trace defect {:.1e}  S($ rho) = {:.6}",
            chan.label().as_str(),
            chan.trace_defect(),
            von_neumann_entropy(&out)
        );
    }

    let m = build_channel(&specs[0])?.apply(&rho)?;
    let diff = m.matrix().max_abs_diff(maximal_mix(&rho, 0.4)?.matrix());
    println!("maximal channel vs direct: {diff:.1e}");
    let a = build_channel(&specs[1])?.apply(&rho)?;
    let diff = a.matrix().max_abs_diff(asymmetric_mix(&rho)?.matrix());
    println!("partialMaximal channel vs direct: {diff:.1e}");

    // A custom map from its action; attestation samples states and flags
    // any entropy decrease.
    let swap = SuperScattering::from_action(n, |x| x.transpose(), 17)?;
    println!("transpose map monotone: {}", swap.is_monotone());
    Ok(())
}
