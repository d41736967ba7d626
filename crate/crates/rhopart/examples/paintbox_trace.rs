//! The paintbox screening construction and its record structure.
//!
//!     cargo run --example paintbox_trace

use rhopart::samplers::{paintbox_sample, verify_record_structure};
use rhopart::{ConstraintSeq, FrequencyModel, RandomStream};

fn main() -> rhopart::Result<()> {
    let rho = ConstraintSeq::parse("1,2;1")?;
    let model = FrequencyModel::parse("iid:uniform")?;
    let mut stream = RandomStream::new(7);

    let trace = paintbox_sample(&model, &rho, 16, &mut stream)?;
    println!("tail masses (levels): {:?}\n", trace.levels);
    println!("index  value     replaced  block");
    for i in 0..trace.values.len() {
        println!(
            "{:>5}  {:.6}  {:>8}  {:>5}",
            i + 1,
            trace.values[i],
            trace.replaced[i],
            trace.partition.block_of(i + 1)
        );
    }
    println!("\npartition: {}", trace.partition);

    // The replaced entries are exactly the weak lower records of the
    // transformed sequence, each level repeated rho_k times.
    verify_record_structure(&trace, &rho).expect("record structure holds on every sample");
    println!("record structure verified.");
    Ok(())
}
