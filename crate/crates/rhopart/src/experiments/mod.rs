//! Statistical campaigns: seeded, reproducible experiments that package
//! the limit theorems and symmetry properties into pass/fail reports.
//!
//! Reports are bit-reproducible from (master seed, config): replicates run
//! on substreams derived from the replicate index and are reduced in a
//! fixed order, so the worker count never changes a result.

pub(crate) mod audit;
mod clt;
mod ctime;
mod records;
pub mod stats;

pub use audit::{
    consistency_audit, equal_probability_default_model, equal_probability_demo,
    sampler_agreement, uniformity_audit, SamplerAgreement, UniformityAudit, UniformityRow,
    DEMO_PARTITION_A, DEMO_PARTITION_B,
};
pub use clt::{block_count_clt, growth_gate, BlockCountClt, CltOutcome, GrowthGate};
pub use ctime::{ctime_jump_clt, gamma_sojourn_audit, CtimeJumpClt, SojournAudit};
pub use records::{chain_record_clt, ChainRecordClt};
pub use stats::{chi_square_uniform, sample_moments, SampleMoments};

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freq::LogMoments;
use crate::stream::RandomStream;

/// One verdict: a statistic checked against a closed interval. Verdicts
/// are pure functions of (value, band); nothing else enters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub pass: bool,
}

impl Check {
    pub fn band(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Check {
            name: name.into(),
            value,
            lo,
            hi,
            pass: value >= lo && value <= hi,
        }
    }

    /// |value| <= max.
    pub fn abs_at_most(name: impl Into<String>, value: f64, max: f64) -> Self {
        Check::band(name, value, -max, max)
    }
}

/// Predicted mean and variance of a block count from the renewal picture:
/// with horizon t (log n, or log T in continuous time), the count is
/// asymptotically Gaussian with mean t/mu and variance sigma^2 mu^-3 t.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RenewalReference {
    pub mu: f64,
    pub sigma2: f64,
    pub horizon: f64,
    pub mean: f64,
    pub variance: f64,
}

impl RenewalReference {
    pub fn new(lm: LogMoments, horizon: f64) -> Result<Self> {
        if !(lm.mu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "renewal reference needs mu > 0, got {}",
                lm.mu
            )));
        }
        Ok(RenewalReference {
            mu: lm.mu,
            sigma2: lm.sigma2,
            horizon,
            mean: horizon / lm.mu,
            variance: lm.sigma2 * horizon / (lm.mu * lm.mu * lm.mu),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moments: Option<SampleMoments>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<RenewalReference>,
    pub details: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
}

impl ReportRow {
    pub fn new(label: impl Into<String>) -> Self {
        ReportRow {
            label: label.into(),
            moments: None,
            reference: None,
            details: BTreeMap::new(),
            checks: Vec::new(),
        }
    }
}

/// A full experiment result: resolved configuration, per-setting rows,
/// and the overall verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub config: BTreeMap<String, serde_json::Value>,
    pub notes: Vec<String>,
    pub rows: Vec<ReportRow>,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>, seed: u64) -> Self {
        ExperimentReport {
            experiment: experiment.into(),
            seed,
            config: BTreeMap::new(),
            notes: Vec::new(),
            rows: Vec::new(),
            pass: true,
        }
    }

    pub fn set_config(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.config.insert(key.to_string(), value.into());
    }

    pub fn push_row(&mut self, row: ReportRow) {
        self.pass &= row.checks.iter().all(|c| c.pass);
        self.rows.push(row);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn all_checks(&self) -> impl Iterator<Item = &Check> {
        self.rows.iter().flat_map(|r| r.checks.iter())
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Tolerance bands for the statistical suites. The shipped defaults match
/// `configs/tolerances.json`; pass a file to override.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// mean(K_n) * mu / log n.
    pub clt_mean_ratio: (f64, f64),
    /// var(K_n) * mu^3 / (sigma^2 log n).
    pub clt_var_ratio: (f64, f64),
    /// var(K_n) / log n when sigma^2 = 0 (degenerate residuals).
    pub clt_degenerate_var_max: f64,
    pub clt_abs_skewness: f64,
    pub clt_abs_excess_kurtosis: f64,
    /// Chain-record count vs (log n)/d.
    pub chain_mean_ratio: (f64, f64),
    /// Chain-record variance vs (log n)/d^2.
    pub chain_var_ratio: (f64, f64),
    /// Continuous-time jump count vs (log T)/mu.
    pub ctime_mean_ratio: (f64, f64),
    /// Empirical probability ratio of the two demo partitions.
    pub equal_prob_ratio: (f64, f64),
    pub uniformity_min_pvalue: f64,
    pub sampler_tv_max: f64,
    /// Exact-arithmetic audits (kernel consistency).
    pub audit_max_deviation: f64,
    /// Monte-Carlo agreement gates, in standard errors.
    pub monte_carlo_z: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            clt_mean_ratio: (0.90, 1.15),
            clt_var_ratio: (0.75, 1.25),
            clt_degenerate_var_max: 0.15,
            clt_abs_skewness: 0.15,
            clt_abs_excess_kurtosis: 0.30,
            chain_mean_ratio: (0.90, 1.10),
            chain_var_ratio: (0.70, 1.30),
            ctime_mean_ratio: (0.90, 1.10),
            equal_prob_ratio: (0.98, 1.02),
            uniformity_min_pvalue: 1e-3,
            sampler_tv_max: 0.01,
            audit_max_deviation: 1e-12,
            monte_carlo_z: 4.0,
        }
    }
}

impl Tolerances {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Dedicated stream for a named experiment under one master seed, so
/// different experiments never share draws.
pub(crate) fn experiment_stream(seed: u64, label: &str) -> RandomStream {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    RandomStream::with_stream(seed, h)
}

/// Run `reps` independent replicates, one derived substream each, and
/// collect results in replicate order. `threads <= 1` runs inline; any
/// other worker count produces the identical vector.
pub(crate) fn run_replicates<T, F>(
    master: &RandomStream,
    reps: u64,
    threads: usize,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut RandomStream) -> Result<T> + Sync,
{
    if threads <= 1 {
        let mut out = Vec::with_capacity(reps as usize);
        for i in 0..reps {
            let mut stream = master.substream(i);
            out.push(f(i, &mut stream)?);
        }
        Ok(out)
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..reps)
                .into_par_iter()
                .map(|i| {
                    let mut stream = master.substream(i);
                    f(i, &mut stream)
                })
                .collect::<Result<Vec<T>>>()
        })
    }
}
