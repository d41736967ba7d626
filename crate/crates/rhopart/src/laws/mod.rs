//! Exact and Monte-Carlo evaluation of the shape law, the formation-
//! sequence law, and the per-partition probabilities.
//!
//! The primary code path works in the tail-mass coordinates H (with
//! H_0 = 1); the frequency coordinates P_k = H_{k-1} - H_k give the same
//! function and are kept as an algebraic cross-check in the tests.

mod decrement;

pub use decrement::{
    decrement_entry, decrement_matrix, ln_decrement_entry, shape_probability_product,
    DecrementMatrix, DECREMENT_N_MAX,
};

use std::collections::BTreeMap;

use crate::composition::Composition;
use crate::counting::{binomial, count_partitions_of_shape};
use crate::error::{Error, Result};
use crate::freq::{FrequencyModel, HPath};
use crate::partition::SetPartition;
use crate::rho::ConstraintSeq;
use crate::samplers::sample_partition;
use crate::special::ln_binomial;
use crate::stream::RandomStream;

/// Read H_j out of a slice holding H_1, H_2, ... (H_0 is implicit).
#[inline]
fn h_at(h: &[f64], j: usize) -> f64 {
    if j == 0 {
        1.0
    } else {
        h[j - 1]
    }
}

fn check_h_prefix(h: &[f64], needed: usize, context: &str) -> Result<()> {
    if h.len() < needed {
        return Err(Error::InvalidParameter(format!(
            "{context}: tail-mass prefix of length {} is too short, need {needed}",
            h.len()
        )));
    }
    let mut prev = 1.0f64;
    for &v in &h[..needed] {
        if !(0.0..=1.0).contains(&v) || v > prev {
            return Err(Error::InvalidParameter(format!(
                "{context}: tail masses must be nonincreasing within [0,1], got {v} after {prev}"
            )));
        }
        prev = v;
    }
    Ok(())
}

/// Accumulate `exponent * ln(base)` treating `0^0 = 1`; `None` means the
/// whole product is zero.
#[inline]
fn add_ln_power(ln_acc: &mut f64, base: f64, exponent: u64) -> Option<()> {
    if exponent == 0 {
        return Some(());
    }
    if base <= 0.0 {
        return None;
    }
    *ln_acc += exponent as f64 * base.ln();
    Some(())
}

/// Probability that the shape of a sampled partition of `[|shape|]` equals
/// `shape`, for one fixed realization of the tail masses:
///
/// ```text
/// p(lambda) = d(lambda) * [prod_{j<l} H_{j-1}^{rho_j} (H_{j-1}-H_j)^{lambda_j-rho_j}]
///             * H_{l-1}^{min(rho_l, lambda_l)} (H_{l-1}-H_l)^{(lambda_l-rho_l)+}
/// ```
///
/// `h` holds H_1, H_2, ...; the products are accumulated in log space.
pub fn shape_probability_fixed_h(
    shape: &Composition,
    rho: &ConstraintSeq,
    h: &[f64],
) -> Result<f64> {
    shape.check_constrained(rho)?;
    if shape.is_empty() {
        return Err(Error::InvalidParameter(
            "shape probability needs a nonempty composition".into(),
        ));
    }
    let l = shape.num_parts();
    let last = shape.parts()[l - 1];
    let rho_l = rho.get(l);
    let needed = if last > rho_l { l } else { l - 1 };
    check_h_prefix(h, needed, "shape_probability_fixed_h")?;

    let tails = shape.tail_sums();
    let mut ln_p = 0.0f64;
    // ln d(lambda)
    for j in 0..l - 1 {
        let r = rho.get(j + 1);
        ln_p += ln_binomial(tails[j] - r, shape.parts()[j] - r);
    }
    for j in 1..l {
        let r = rho.get(j);
        let hj1 = h_at(h, j - 1);
        let hj = h_at(h, j);
        if add_ln_power(&mut ln_p, hj1, r).is_none()
            || add_ln_power(&mut ln_p, hj1 - hj, shape.parts()[j - 1] - r).is_none()
        {
            return Ok(0.0);
        }
    }
    let hl1 = h_at(h, l - 1);
    if add_ln_power(&mut ln_p, hl1, rho_l.min(last)).is_none() {
        return Ok(0.0);
    }
    if last > rho_l {
        let hl = h_at(h, l);
        if add_ln_power(&mut ln_p, hl1 - hl, last - rho_l).is_none() {
            return Ok(0.0);
        }
    }
    Ok(ln_p.exp())
}

/// Probability of one specific partition under fixed tail masses: the
/// product of its per-element growth-rule probabilities. Equals
/// `shape_probability_fixed_h(shape) / d(shape)` — given the shape, all
/// partitions are equally likely.
pub fn partition_probability_fixed_h(
    partition: &SetPartition,
    rho: &ConstraintSeq,
    h: &[f64],
) -> Result<f64> {
    let n = partition.n();
    let mut sizes: Vec<u64> = vec![1];
    let mut prob = 1.0f64;
    for m in 2..=n {
        let l = sizes.len();
        let established = sizes[l - 1] >= rho.get(l);
        let b = partition.block_of(m);
        let need = if established { l } else { l - 1 };
        check_h_prefix(h, need, "partition_probability_fixed_h")?;
        let step = if b < l {
            h_at(h, b - 1) - h_at(h, b)
        } else if b == l {
            if established {
                h_at(h, l - 1) - h_at(h, l)
            } else {
                h_at(h, l - 1)
            }
        } else if established {
            h_at(h, l)
        } else {
            // The growth rules never open a block while the last one is
            // still establishing.
            0.0
        };
        prob *= step;
        if b == sizes.len() + 1 {
            sizes.push(1);
        } else {
            sizes[b - 1] += 1;
        }
    }
    Ok(prob)
}

/// Exact shape law at `n` under fixed tail masses, by forward dynamic
/// programming over all growth paths. Independent of the closed form in
/// [`shape_probability_fixed_h`], which it cross-checks.
pub fn shape_law_fixed_h(
    rho: &ConstraintSeq,
    h: &[f64],
    n: u64,
) -> Result<BTreeMap<Composition, f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let mut law: BTreeMap<Composition, f64> = BTreeMap::new();
    law.insert(Composition::new(vec![1]).unwrap(), 1.0);
    for _ in 1..n {
        let mut next: BTreeMap<Composition, f64> = BTreeMap::new();
        for (shape, &mass) in &law {
            let l = shape.num_parts();
            let established = shape.parts()[l - 1] >= rho.get(l);
            let need = if established { l } else { l - 1 };
            check_h_prefix(h, need, "shape_law_fixed_h")?;
            let mut push = |parts: Vec<u64>, p: f64| {
                if p > 0.0 {
                    *next.entry(Composition::new(parts).unwrap()).or_insert(0.0) += mass * p;
                }
            };
            let grown = |j: usize| -> Vec<u64> {
                let mut parts = shape.parts().to_vec();
                parts[j] += 1;
                parts
            };
            for j in 1..l {
                push(grown(j - 1), h_at(h, j - 1) - h_at(h, j));
            }
            if established {
                push(grown(l - 1), h_at(h, l - 1) - h_at(h, l));
                let mut parts = shape.parts().to_vec();
                parts.push(1);
                push(parts, h_at(h, l));
            } else {
                push(grown(l - 1), h_at(h, l - 1));
            }
        }
        law = next;
    }
    Ok(law)
}

/// How a Monte-Carlo shape probability is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PMethod {
    /// Average the fixed-H formula over path draws.
    AverageConditional,
    /// Count exact shape hits from the sequential sampler.
    ShapeFrequency,
}

impl PMethod {
    pub fn name(&self) -> &'static str {
        match self {
            PMethod::AverageConditional => "average-conditional",
            PMethod::ShapeFrequency => "shape-frequency",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub reps: u64,
    pub method: &'static str,
}

impl Estimate {
    /// |this - reference| in units of the standard error.
    pub fn z_against(&self, reference: f64) -> f64 {
        if self.std_error == 0.0 {
            if (self.value - reference).abs() < 1e-12 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.value - reference).abs() / self.std_error
        }
    }
}

/// Monte-Carlo estimate of the shape probability.
pub fn shape_probability_monte_carlo(
    shape: &Composition,
    rho: &ConstraintSeq,
    model: &FrequencyModel,
    reps: u64,
    stream: &mut RandomStream,
    method: PMethod,
) -> Result<Estimate> {
    shape.check_constrained(rho)?;
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be positive".into()));
    }
    let l = shape.num_parts();
    let needed = if shape.parts()[l - 1] > rho.get(l) {
        l
    } else {
        l - 1
    };
    let n = shape.total() as usize;
    let mut sum = 0.0f64;
    let mut sumsq = 0.0f64;
    for _ in 0..reps {
        let x = match method {
            PMethod::AverageConditional => {
                let mut path = HPath::new(model);
                path.ensure(needed, stream)?;
                shape_probability_fixed_h(shape, rho, path.realized_tail())?
            }
            PMethod::ShapeFrequency => {
                let p = sample_partition(model, rho, n, stream)?;
                f64::from(&p.shape() == shape)
            }
        };
        sum += x;
        sumsq += x * x;
    }
    let mean = sum / reps as f64;
    let var = (sumsq / reps as f64 - mean * mean).max(0.0);
    Ok(Estimate {
        value: mean,
        std_error: (var / reps as f64).sqrt(),
        reps,
        method: method.name(),
    })
}

fn check_formation_domain(shape: &Composition, rho: &ConstraintSeq) -> Result<()> {
    if shape.is_empty()
        || shape.parts()[0] != rho.get(1)
        || shape
            .parts()
            .iter()
            .enumerate()
            .any(|(j, &p)| p < rho.get(j + 1))
    {
        return Err(Error::InvalidParameter(format!(
            "formation law is defined for lambda_1 = rho_1 and lambda_j >= rho_j, got {shape}"
        )));
    }
    Ok(())
}

/// Probability that the formation sequence starts with the partial sums of
/// `shape`, under fixed tail masses:
///
/// ```text
/// q(lambda) = prod_{j=1}^{l-1} C(lambda_{j+1}-1, rho_{j+1}-1)
///             * H_j^{rho_{j+1}} (1-H_j)^{lambda_{j+1}-rho_{j+1}}
/// ```
pub fn formation_probability_fixed_h(
    shape: &Composition,
    rho: &ConstraintSeq,
    h: &[f64],
) -> Result<f64> {
    check_formation_domain(shape, rho)?;
    let l = shape.num_parts();
    check_h_prefix(h, l - 1, "formation_probability_fixed_h")?;
    let mut ln_q = 0.0f64;
    for j in 1..l {
        let lam = shape.parts()[j];
        let r = rho.get(j + 1);
        ln_q += (binomial(lam - 1, r - 1)? as f64).ln();
        let hj = h_at(h, j);
        if add_ln_power(&mut ln_q, hj, r).is_none()
            || add_ln_power(&mut ln_q, 1.0 - hj, lam - r).is_none()
        {
            return Ok(0.0);
        }
    }
    Ok(ln_q.exp())
}

/// Monte-Carlo mode of the formation law: average the fixed-H value over
/// fresh path draws.
pub fn formation_probability_monte_carlo(
    shape: &Composition,
    rho: &ConstraintSeq,
    model: &FrequencyModel,
    reps: u64,
    stream: &mut RandomStream,
) -> Result<Estimate> {
    check_formation_domain(shape, rho)?;
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be positive".into()));
    }
    let needed = shape.num_parts() - 1;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..reps {
        let mut path = HPath::new(model);
        path.ensure(needed, stream)?;
        let x = formation_probability_fixed_h(shape, rho, path.realized_tail())?;
        sum += x;
        sumsq += x * x;
    }
    let mean = sum / reps as f64;
    let var = (sumsq / reps as f64 - mean * mean).max(0.0);
    Ok(Estimate {
        value: mean,
        std_error: (var / reps as f64).sqrt(),
        reps,
        method: "average-conditional",
    })
}

/// Exchangeable partition probability function of the two-parameter
/// family: the probability of one particular partition of `[n]` whose
/// shape is `parts` (any composition — the value is invariant under
/// permutations of the parts). Computed as the product-formula shape
/// probability divided by the number of partitions of that shape.
pub fn eppf_two_parameter(parts: &Composition, alpha: f64, theta: f64) -> Result<f64> {
    let model = FrequencyModel::two_parameter(alpha, theta)?;
    let rho = ConstraintSeq::ones();
    if parts.is_empty() {
        return Err(Error::InvalidParameter(
            "eppf needs a nonempty composition".into(),
        ));
    }
    let p = shape_probability_product(parts, &rho, &model)?;
    let d = count_partitions_of_shape(parts, &rho)? as f64;
    Ok(p / d)
}
