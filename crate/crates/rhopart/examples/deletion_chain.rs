//! The deletion kernel: exact transition law and the literal urn walk.
//!
//!     cargo run --example deletion_chain

use rhopart::samplers::{deletion_kernel, deletion_step};
use rhopart::{Composition, ConstraintSeq, RandomStream};

fn main() -> rhopart::Result<()> {
    let rho = ConstraintSeq::parse("1,2;1")?;
    let start = Composition::parse("3,3,2")?;

    println!("exact transition law from {start} (rho = {rho}):");
    for (target, p) in deletion_kernel(&start, &rho)? {
        println!("  -> {target:<8} prob {p:.6}");
    }

    let mut stream = RandomStream::new(3);
    let mut state = start.clone();
    print!("\none urn walk: {state}");
    while !state.is_empty() {
        state = deletion_step(&state, &rho, &mut stream)?;
        print!(" -> {state}");
    }
    println!();

    // Empirical frequencies of the first step against the exact law.
    let exact = deletion_kernel(&start, &rho)?;
    let reps = 100_000;
    let mut counts = std::collections::BTreeMap::new();
    for _ in 0..reps {
        let next = deletion_step(&start, &rho, &mut stream)?;
        *counts.entry(next).or_insert(0u64) += 1;
    }
    println!("\nurn frequencies over {reps} draws vs the exact law:");
    for (target, p) in &exact {
        let freq = counts.get(target).copied().unwrap_or(0) as f64 / reps as f64;
        println!("  {target:<8} empirical {freq:.4}  exact {p:.4}");
    }
    Ok(())
}
