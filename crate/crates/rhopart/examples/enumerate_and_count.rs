//! Enumerate constrained partitions and check the closed-form counts.
//!
//!     cargo run --example enumerate_and_count

use rhopart::{
    constrained_compositions, count_extensions, count_partitions_of_shape, enumerate_partitions,
    Composition, ConstraintSeq,
};

fn main() -> rhopart::Result<()> {
    let rho = ConstraintSeq::parse("1,2;1")?;
    let n = 5;

    println!("constrained partitions of [{n}] for rho = {rho}:");
    let all = enumerate_partitions(n, &rho)?;
    for p in &all {
        println!("  {p}   shape {}", p.shape());
    }
    println!("total: {}\n", all.len());

    println!("per-shape counts, formula vs enumeration:");
    for shape in constrained_compositions(n, &rho) {
        let formula = count_partitions_of_shape(&shape, &rho)?;
        let brute = all.iter().filter(|p| p.shape() == shape).count();
        println!("  shape {shape:<8} d = {formula:<4} enumerated = {brute}");
        assert_eq!(formula, brute as u128);
    }

    // How many partitions of [8] with shape (3,3,2) extend a fixed
    // partition of [4] with shape (2,2)?
    let small = Composition::parse("2,2")?;
    let big = Composition::parse("3,3,2")?;
    println!(
        "\nextensions of a fixed shape-(2,2) partition of [4] to shape (3,3,2) on [8]: {}",
        count_extensions(&small, &big, &rho)?
    );
    Ok(())
}
