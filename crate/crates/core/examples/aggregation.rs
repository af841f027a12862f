use entropyflow::classical::{aggregate_asymmetric, aggregate_naive, negentropy, shannon_entropy, ProbabilityVector};

fn main() -> entropyflow::Result<()> {
    let n = 8;
    let mut p = ProbabilityVector::from_weights(&[8.0, 4.0, 2.0, 1.0, 1.0, 0.5, 0.25, 0.25])?;
    println!("round  S        negentropy");
    for round in 0..=40 {
        if round % 8 == 0 {
            println!("{round:>5}  {:.6} {:.3e}", shannon_entropy(&p), negentropy(&p));
        }
        let a = round % n;
        p = aggregate_naive(&p, a, (a + 1) % n)?;
    }

    // Asymmetric merges mix the pair with weights lambda and 1 - lambda.
    let q = ProbabilityVector::new(vec![0.7, 0.2, 0.1])?;
    for lambda in [0.1, 0.25, 0.5, 0.9] {
        let r = aggregate_asymmetric(&q, 0, 2, lambda)?;
        println!("lambda = {lambda}: {:?} S = {:.6}", r.probs(), shannon_entropy(&r));
    }
    Ok(())
}
