//! The formation sequence (the rho_k-th least element of each block) and
//! its law.
//!
//!     cargo run --example formation_sequences

use rhopart::laws::formation_probability_fixed_h;
use rhopart::samplers::sample_partition;
use rhopart::{Composition, ConstraintSeq, FrequencyModel, RandomStream};

fn main() -> rhopart::Result<()> {
    let rho = ConstraintSeq::parse("1,2;1")?;
    let model = FrequencyModel::parse("fixed:0.5,0.25;geom=0.5")?;

    // q((1,3)) = C(2,1) H_1^2 (1-H_1) = 0.25 with H_1 = 0.5: the chance
    // that the formation sequence starts (1, 4).
    let lambda = Composition::parse("1,3")?;
    let q = formation_probability_fixed_h(&lambda, &rho, &[0.5, 0.25])?;
    println!("q({lambda}) = {q} (formation sequence starts 1, 4)");

    let reps = 200_000;
    let master = RandomStream::new(5);
    let mut hits = 0u64;
    for rep in 0..reps {
        let mut stream = master.substream(rep);
        let p = sample_partition(&model, &rho, 4, &mut stream)?;
        if p.formation_sequence(&rho) == vec![1, 4] {
            hits += 1;
        }
    }
    let freq = hits as f64 / reps as f64;
    println!("empirical frequency over {reps} samples: {freq:.5}");

    // A few sampled partitions with their formation sequences.
    let mut stream = master.substream(reps + 1);
    println!("\nsamples of [9]:");
    for _ in 0..6 {
        let p = sample_partition(&model, &rho, 9, &mut stream)?;
        println!("  {p:<28} formation {:?}", p.formation_sequence(&rho));
    }
    Ok(())
}
