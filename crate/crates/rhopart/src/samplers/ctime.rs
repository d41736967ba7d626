//! Continuous-time embedding: the nonincreasing pure-jump process that
//! sits in state `s = H_{k-1}` for a gamma(rho_k, rate s) sojourn and then
//! drops to `s * W_k`. Real-valued establishment counts are allowed here —
//! the gamma shape need not be an integer.

use rand_distr::Distribution;

use crate::error::{Error, Result};
use crate::freq::{FrequencyModel, HPath};
use crate::rho::RealConstraintSeq;
use crate::stream::RandomStream;

#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Jump epochs within [0, T], strictly increasing.
    pub jump_times: Vec<f64>,
    /// Visited states starting at 1; states[k] is the state after the k-th
    /// jump, so `states.len() == jump_times.len() + 1`.
    pub states: Vec<f64>,
    /// Every sojourn actually drawn, in order. The last entry is the draw
    /// that crossed the horizon, so audits see uncensored gamma variables.
    pub sojourns: Vec<f64>,
}

impl Trajectory {
    pub fn jump_count(&self) -> usize {
        self.jump_times.len()
    }
}

pub fn sample_trajectory(
    model: &FrequencyModel,
    rho: &RealConstraintSeq,
    horizon: f64,
    stream: &mut RandomStream,
) -> Result<Trajectory> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "horizon must be positive and finite, got {horizon}"
        )));
    }
    let mut path = HPath::new(model);
    let mut jump_times = Vec::new();
    let mut states = vec![1.0f64];
    let mut sojourns = Vec::new();
    let mut t = 0.0f64;
    let mut k = 1usize;
    loop {
        let state = states[k - 1];
        if state <= 0.0 {
            // Absorbed: no further jumps can happen in finite time.
            break;
        }
        let shape = rho.get(k);
        let gamma = rand_distr::Gamma::new(shape, 1.0 / state)
            .map_err(|e| Error::InvalidParameter(format!("gamma({shape}, rate {state}): {e}")))?;
        let sojourn = gamma.sample(stream);
        sojourns.push(sojourn);
        t += sojourn;
        if t > horizon {
            break;
        }
        jump_times.push(t);
        states.push(path.h(k, stream)?);
        k += 1;
    }
    Ok(Trajectory {
        jump_times,
        states,
        sojourns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freq::WDistribution;

    #[test]
    fn trajectory_shape_invariants() {
        let model = FrequencyModel::uniform_stick();
        let rho = RealConstraintSeq::parse(";1").unwrap();
        let master = RandomStream::new(0x717E);
        for rep in 0..100u64 {
            let mut s = master.substream(rep);
            let traj = sample_trajectory(&model, &rho, 1000.0, &mut s).unwrap();
            assert_eq!(traj.states[0], 1.0);
            assert_eq!(traj.states.len(), traj.jump_times.len() + 1);
            assert!(traj.states.windows(2).all(|w| w[1] < w[0]));
            assert!(traj.jump_times.windows(2).all(|w| w[1] > w[0]));
            assert!(traj.jump_times.iter().all(|&t| t <= 1000.0));
            assert_eq!(traj.sojourns.len(), traj.jump_times.len() + 1);
        }
    }

    #[test]
    fn first_sojourn_mean_is_rho_over_state() {
        // In state 1 the sojourn is gamma(rho_1, 1), mean rho_1.
        let model = FrequencyModel::uniform_stick();
        let rho = RealConstraintSeq::parse("0.5;0.5").unwrap();
        let master = RandomStream::new(0x50F4);
        let reps = 100_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for rep in 0..reps {
            let mut s = master.substream(rep);
            let traj = sample_trajectory(&model, &rho, 1e12, &mut s).unwrap();
            let x = traj.sojourns[0];
            sum += x;
            sumsq += x * x;
        }
        let mean = sum / reps as f64;
        let var = sumsq / reps as f64 - mean * mean;
        let se = (var / reps as f64).sqrt();
        assert!(
            (mean - 0.5).abs() < 4.0 * se,
            "mean {mean}, expected 0.5 (se {se})"
        );
    }

    #[test]
    fn point_mass_states_are_deterministic() {
        let w = 0.5f64;
        let model = FrequencyModel::iid(WDistribution::PointMass(w)).unwrap();
        let rho = RealConstraintSeq::parse(";1").unwrap();
        let mut s = RandomStream::new(3);
        let traj = sample_trajectory(&model, &rho, 1e6, &mut s).unwrap();
        for (k, &state) in traj.states.iter().enumerate() {
            assert!((state - w.powi(k as i32)).abs() < 1e-12);
        }
    }
}
