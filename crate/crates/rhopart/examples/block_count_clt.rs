//! Desk-scale block-count experiment: the number of blocks grows like
//! (log n)/mu with Gaussian fluctuations of variance sigma^2 mu^-3 log n.
//!
//!     cargo run --release --example block_count_clt

use rhopart::experiments::{block_count_clt, BlockCountClt, Tolerances};
use rhopart::{ConstraintSeq, FrequencyModel};

fn main() -> rhopart::Result<()> {
    let cfg = BlockCountClt {
        model: FrequencyModel::parse("iid:uniform")?,
        rho: ConstraintSeq::parse("1,2;1")?,
        n_list: vec![1_000, 10_000, 100_000],
        reps: 2_000,
        seed: 42,
        threads: 2,
        tolerances: Tolerances::default(),
    };
    let outcome = block_count_clt(&cfg)?;
    for row in &outcome.report.rows {
        let m = row.moments.as_ref().unwrap();
        let r = row.reference.as_ref().unwrap();
        println!(
            "{:<10} mean {:.3} (ref {:.3})   var {:.3} (ref {:.3})   skew {:+.3}   exkurt {:+.3}",
            row.label, m.mean, r.mean, m.variance, r.variance, m.skewness, m.excess_kurtosis
        );
    }
    println!(
        "\nfull report:\n{}",
        serde_json::to_string_pretty(&outcome.report.rows.last().unwrap().checks).unwrap()
    );
    Ok(())
}
