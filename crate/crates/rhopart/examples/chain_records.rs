//! Chain records on the product-ordered cube: a concrete regenerative
//! space whose record partition is the all-ones constraint case.
//!
//!     cargo run --example chain_records

use rhopart::samplers::chain_record_sample;
use rhopart::RandomStream;

fn main() -> rhopart::Result<()> {
    let mut stream = RandomStream::new(2);
    let sample = chain_record_sample(2, 40, &mut stream)?;

    println!("records among 40 points on [0,1]^2:");
    for (k, (idx, r)) in sample
        .record_indices
        .iter()
        .zip(&sample.records)
        .enumerate()
    {
        println!(
            "  record {:>2} at index {:>2}: ({:.4}, {:.4})   tail mass {:.6}",
            k + 1,
            idx,
            r[0],
            r[1],
            sample.tail_masses[k]
        );
    }
    println!("\ninduced partition: {}", sample.partition);

    // Record counts grow like (log n)/d.
    let master = RandomStream::new(77);
    for d in 1..=3usize {
        let n = 100_000;
        let reps = 300;
        let mut total = 0usize;
        for rep in 0..reps {
            let mut s = master.substream((d * 1000 + rep) as u64);
            total += rhopart::samplers::chain_record_count(d, n, &mut s)?;
        }
        let mean = total as f64 / reps as f64;
        println!(
            "d = {d}: mean records over {reps} runs of n = {n}: {mean:.2}  ((log n)/d = {:.2})",
            (n as f64).ln() / d as f64
        );
    }
    Ok(())
}
