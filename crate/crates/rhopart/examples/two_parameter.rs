//! The two-parameter family: EPPF values, part symmetry, and agreement
//! with a Chinese-restaurant seating simulation.
//!
//!     cargo run --example two_parameter

use std::collections::BTreeMap;

use rhopart::laws::eppf_two_parameter;
use rhopart::{
    constrained_compositions, count_partitions_of_shape, Composition, ConstraintSeq, RandomStream,
};

/// One Chinese-restaurant seating of n customers; returns the block sizes
/// in order of first appearance.
fn crp_shape(alpha: f64, theta: f64, n: usize, stream: &mut RandomStream) -> Composition {
    let mut sizes: Vec<u64> = vec![1];
    for m in 1..n {
        let mut u = stream.uniform() * (m as f64 + theta);
        let mut seated = false;
        for s in sizes.iter_mut() {
            let w = *s as f64 - alpha;
            if u < w {
                *s += 1;
                seated = true;
                break;
            }
            u -= w;
        }
        if !seated {
            sizes.push(1);
        }
    }
    Composition::new(sizes).expect("positive sizes")
}

fn main() -> rhopart::Result<()> {
    let (alpha, theta) = (0.5, 0.5);
    println!("eppf values for (alpha, theta) = ({alpha}, {theta}), n = 4:");
    let ones = ConstraintSeq::ones();
    for shape in constrained_compositions(4, &ones) {
        println!(
            "  {shape:<8} eppf {:.6}   (x {} partitions of this shape)",
            eppf_two_parameter(&shape, alpha, theta)?,
            count_partitions_of_shape(&shape, &ones)?
        );
    }

    // The EPPF is a function of the multiset of parts only.
    let a = eppf_two_parameter(&Composition::parse("3,1,2")?, alpha, theta)?;
    let b = eppf_two_parameter(&Composition::parse("1,2,3")?, alpha, theta)?;
    println!("\nsymmetry: eppf(3,1,2) = {a:.10} = eppf(1,2,3) = {b:.10}");

    // Restaurant-seating frequencies against eppf * d.
    let mut stream = RandomStream::new(123);
    let reps = 200_000;
    let mut counts: BTreeMap<Composition, u64> = BTreeMap::new();
    for _ in 0..reps {
        *counts.entry(crp_shape(alpha, theta, 5, &mut stream)).or_insert(0) += 1;
    }
    println!("\nshape frequencies at n = 5, {reps} seatings:");
    for shape in constrained_compositions(5, &ones) {
        let expected =
            eppf_two_parameter(&shape, alpha, theta)? * count_partitions_of_shape(&shape, &ones)? as f64;
        let freq = counts.get(&shape).copied().unwrap_or(0) as f64 / reps as f64;
        println!("  {shape:<10} seating {freq:.5}   eppf*d {expected:.5}");
    }
    Ok(())
}
