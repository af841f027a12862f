//! Box-averaging a continuum density and the hidden information it creates.
//!
//! ```text
//! cargo run --example box_averaging
//! ```

use entropyflow::classical::{
    box_hidden_information, box_probabilities, boxwise_density, continuum_entropy,
    geometric_mean_volume, shannon_entropy, BoxPartition, GridDensity,
};

fn main() -> entropyflow::Result<()> {
    // A bump on [0, 1] with 200 cells.
    let rho = GridDensity::from_fn(vec![200], vec![1.0 / 200.0], 1.0, |x| {
        (-(x[0] - 0.3).powi(2) / 0.005).exp() + 0.2
    })?;
    println!("fine-grained S(rho) = {:.6}", continuum_entropy(&rho));
    println!("{:>6} {:>12} {:>12} {:>12}", "boxes", "S(rho_B)", "S_B+ln V", "hidden");
    for boxes in [1, 2, 5, 10, 50, 200] {
        let part = BoxPartition::slabs(&rho, boxes)?;
        let p = box_probabilities(&rho, &part)?;
        let coarse = continuum_entropy(&boxwise_density(&rho, &part)?);
        let identity = shannon_entropy(&p) + (rho.rho_star() * geometric_mean_volume(&p, &part)?).ln();
        let hidden = box_hidden_information(&rho, &part)?;
        println!("{boxes:>6} {coarse:>12.6} {identity:>12.6} {hidden:>12.6}");
    }

    // Unequal boxes: the Shannon entropy of the box probabilities alone
    // misses the volume term.
    let part = BoxPartition::from_fn(&rho, |i| if i < 20 { 0 } else { 1 })?;
    let p = box_probabilities(&rho, &part)?;
    println!(
        "unequal split: S_B = {:.6}, Vbar = {:.6}, hidden = {:.6}",
        shannon_entropy(&p),
        geometric_mean_volume(&p, &part)?,
        box_hidden_information(&rho, &part)?
    );

    // The reference density shifts every entropy but not the hidden information.
    for rs in [0.1, 1.0, 10.0] {
        let r = rho.with_rho_star(rs)?;
        println!(
            "rho* = {rs:>4}: S = {:>9.6}, hidden = {:.12}",
            continuum_entropy(&r),
            box_hidden_information(&r, &part)?
        );
    }
    Ok(())
}
