//! Grow partitions element by element from a frequency model.
//!
//!     cargo run --example sample_sequential

use rhopart::samplers::sample_partition;
use rhopart::{ConstraintSeq, FrequencyModel, RandomStream};

fn main() -> rhopart::Result<()> {
    let rho = ConstraintSeq::parse("1,2;1")?;
    let model = FrequencyModel::parse("iid:uniform")?;
    let master = RandomStream::new(42);

    println!("ten partitions of [12], rho = {rho}, model = {model}:");
    for rep in 0..10 {
        let mut stream = master.substream(rep);
        let p = sample_partition(&model, &rho, 12, &mut stream)?;
        println!(
            "  {p}   shape {}   formation {:?}",
            p.shape(),
            p.formation_sequence(&rho)
        );
        assert!(p.is_valid(&rho));
    }

    // Restriction consistency in action: restricting a bigger sample is
    // the same kind of object.
    let mut stream = master.substream(99);
    let big = sample_partition(&model, &rho, 1000, &mut stream)?;
    println!(
        "\none partition of [1000]: {} blocks; restricted to [10]: {}",
        big.block_count(),
        big.restrict(10)?
    );
    Ok(())
}
