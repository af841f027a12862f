//! Entropy curves of the four tuneable coarse-graining families with their
//! hidden-information bounds, on the Bell state and a random 2x3 state.

use entropyflow::quantum::{
    default_s_grid, entropy_flow_curve, BipartiteEntropies, CoarseFamily, DensityMatrix,
    ProjectorBasis,
};
use entropyflow::sampling::{random_density_matrix, rng_from_seed};

fn show(label: &str, rho: &DensityMatrix) -> entropyflow::Result<()> {
    let e = BipartiteEntropies::of(rho)?;
    println!("== {label}: S_A = {:.4}, S_B = {:.4}, S_AB = {:.4}", e.a, e.b, e.joint);
    let families = [
        CoarseFamily::MaximalMix,
        CoarseFamily::TuneablePartialTrace,
        CoarseFamily::TuneableAsymmetricMix,
        CoarseFamily::PartialDecoherence(ProjectorBasis::computational(rho.dim())),
    ];
    for fam in &families {
        let curve = entropy_flow_curve(fam, rho, &default_s_grid())?;
        println!("{}", fam.name());
        for p in curve.iter().step_by(5) {
            println!(
                "  s = {:.2}  S = {:.6}  I = {:.6}  in [{:.6}, {:.6}]",
                p.s, p.entropy, p.hidden, p.lower, p.upper
            );
        }
    }
    Ok(())
}

fn main() -> entropyflow::Result<()> {
    show("bell", &DensityMatrix::bell())?;
    let mut rng = rng_from_seed(7);
    let rho = random_density_matrix(&mut rng, 6)?.into_bipartite((2, 3))?;
    show("random 2x3", &rho)
}
