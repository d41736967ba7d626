//! The continuous-time embedding: gamma sojourns, fractional
//! establishment counts, and jump counts over [0, T].
//!
//!     cargo run --example continuous_time

use rhopart::experiments::{ctime_jump_clt, CtimeJumpClt, Tolerances};
use rhopart::samplers::sample_trajectory;
use rhopart::{FrequencyModel, RandomStream, RealConstraintSeq};

fn main() -> rhopart::Result<()> {
    let model = FrequencyModel::parse("iid:uniform")?;

    // Fractional establishment counts are fine here: sojourn in state s
    // is gamma(rho_k, rate s).
    let rho = RealConstraintSeq::parse("0.5;0.5")?;
    let mut stream = RandomStream::new(12);
    let traj = sample_trajectory(&model, &rho, 5_000.0, &mut stream)?;
    println!("one trajectory (rho = {rho}, T = 5000):");
    for (i, t) in traj.jump_times.iter().enumerate() {
        println!(
            "  jump {:>2} at t = {:>10.3}  ->  state {:.6}",
            i + 1,
            t,
            traj.states[i + 1]
        );
    }

    // Jump counts over [0, e^8] concentrate near 8 (= log T / mu).
    let cfg = CtimeJumpClt {
        model,
        rho: RealConstraintSeq::parse(";1")?,
        horizons: vec![(8.0f64).exp()],
        reps: 4_000,
        seed: 9,
        threads: 2,
        tolerances: Tolerances::default(),
    };
    let report = ctime_jump_clt(&cfg)?;
    let row = &report.rows[0];
    let m = row.moments.as_ref().unwrap();
    println!(
        "\njump count over [0, e^8]: mean {:.3} (reference {:.3}), variance {:.3}",
        m.mean,
        row.reference.as_ref().unwrap().mean,
        m.variance
    );
    Ok(())
}
