//! Full and partial decoherence in a rotated basis. The entropy gained by
//! full decoherence equals the relative entropy to the dephased state.

use entropyflow::linalg::{ComplexMatrix, C64};
use entropyflow::quantum::{
    decohere_full, decohere_partial, relative_entropy, von_neumann_entropy, DensityMatrix,
    ProjectorBasis,
};

fn main() -> entropyflow::Result<()> {
    let r = 0.5f64.sqrt();
    let plus = DensityMatrix::pure(&[C64::new(r, 0.0), C64::new(r, 0.0)])?;
    let z = ProjectorBasis::computational(2);
    let x = ProjectorBasis::from_unitary(&ComplexMatrix::from_real(2, 2, &[r, r, r, -r])?)?;

    for (name, basis) in [("z", &z), ("x", &x)] {
        let d = decohere_full(&plus, basis)?;
        println!(
            "|+> dephased in {name}: S = {:.6}, D(rho||rho_D) = {:.6}",
            von_neumann_entropy(&d),
            relative_entropy(&plus, &d)?
        );
    }
    for s in [0.0, 0.5, 0.9, 1.0] {
        let d = decohere_partial(&plus, &z, s)?;
        println!("s = {s}: eigenvalues {:?}", d.eigenvalues());
    }
    Ok(())
}
