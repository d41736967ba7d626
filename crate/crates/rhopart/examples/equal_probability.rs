//! Two very different-looking partitions of [8] with the same shape must
//! carry exactly the same probability under any constrained-exchangeable
//! law with rho = (1,2,1,...).
//!
//!     cargo run --example equal_probability

use rhopart::experiments::{
    equal_probability_default_model, equal_probability_demo, DEMO_PARTITION_A, DEMO_PARTITION_B,
};

fn main() -> rhopart::Result<()> {
    println!("partition A: {DEMO_PARTITION_A}");
    println!("partition B: {DEMO_PARTITION_B}\n");

    let model = equal_probability_default_model();
    let report = equal_probability_demo(&model, 1_000_000, 42, 2, None)?;
    println!("{}", report.to_json_pretty());
    Ok(())
}
