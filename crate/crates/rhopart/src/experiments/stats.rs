//! Sample-moment summaries and small test statistics.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma_ur;

/// First four standardized sample moments with normal-theory standard
/// errors. Every reported moment carries its Monte-Carlo standard error.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleMoments {
    pub reps: u64,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub se_mean: f64,
    pub se_variance: f64,
    pub se_skewness: f64,
    pub se_excess_kurtosis: f64,
}

pub fn sample_moments(xs: &[f64]) -> SampleMoments {
    let n = xs.len() as f64;
    assert!(xs.len() >= 2, "need at least two observations");
    let mean = xs.iter().sum::<f64>() / n;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    for &x in xs {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    let variance = m2 * n / (n - 1.0);
    let skewness = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
    let excess_kurtosis = if m2 > 0.0 { m4 / (m2 * m2) - 3.0 } else { 0.0 };
    SampleMoments {
        reps: xs.len() as u64,
        mean,
        variance,
        skewness,
        excess_kurtosis,
        se_mean: (variance / n).sqrt(),
        se_variance: variance * (2.0 / (n - 1.0)).sqrt(),
        se_skewness: (6.0 / n).sqrt(),
        se_excess_kurtosis: (24.0 / n).sqrt(),
    }
}

/// Chi-square goodness-of-fit statistic and p-value for observed counts
/// against the uniform law over the cells. A single cell has nothing to
/// test and reports p = 1.
pub fn chi_square_uniform(counts: &[u64]) -> (f64, f64) {
    let k = counts.len();
    if k <= 1 {
        return (0.0, 1.0);
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return (0.0, 1.0);
    }
    let expected = total as f64 / k as f64;
    let stat: f64 = counts
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum();
    let df = (k - 1) as f64;
    let p = gamma_ur(df / 2.0, stat / 2.0);
    (stat, p)
}
