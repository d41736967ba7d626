//! Decrement matrices and the product formula.
//!
//! When the residual fractions are independent betas, the shape law
//! factorizes over blocks: `p(lambda) = prod_k q_k(Lambda_k : lambda_k)`
//! where the decrement matrix row is the beta-binomial-type law
//!
//! ```text
//! q_k(n:m) = C(n-rho_k, m-rho_k) (a_k)_{m-rho_k} (b_k)_{n-m} / (a_k+b_k)_{n-rho_k}
//! ```
//!
//! with rising factorials evaluated in log-gamma space, plus the
//! convention rows `q_k(n:n) = 1` for `n < rho_k`.

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::freq::FrequencyModel;
use crate::rho::ConstraintSeq;
use crate::special::{ln_binomial, ln_rising};

/// Precision budget for matrix construction.
pub const DECREMENT_N_MAX: u64 = 200;

/// ln q_k(n:m); `None` where the entry is exactly zero.
pub fn ln_decrement_entry(rho_k: u64, a: f64, b: f64, n: u64, m: u64) -> Option<f64> {
    if m == 0 || m > n {
        return None;
    }
    if n < rho_k {
        return if m == n { Some(0.0) } else { None };
    }
    if m < rho_k {
        return None;
    }
    Some(
        ln_binomial(n - rho_k, m - rho_k) + ln_rising(a, m - rho_k) + ln_rising(b, n - m)
            - ln_rising(a + b, n - rho_k),
    )
}

/// q_k(n:m) itself.
pub fn decrement_entry(rho_k: u64, a: f64, b: f64, n: u64, m: u64) -> f64 {
    ln_decrement_entry(rho_k, a, b, n, m).map_or(0.0, f64::exp)
}

#[derive(Debug, Clone)]
pub struct DecrementMatrix {
    pub rho_k: u64,
    pub a: f64,
    pub b: f64,
    /// rows[n-1][m-1] = q_k(n:m) for 1 <= m <= n <= n_max.
    rows: Vec<Vec<f64>>,
}

impl DecrementMatrix {
    pub fn n_max(&self) -> u64 {
        self.rows.len() as u64
    }

    pub fn row(&self, n: u64) -> &[f64] {
        &self.rows[(n - 1) as usize]
    }

    pub fn get(&self, n: u64, m: u64) -> f64 {
        self.rows[(n - 1) as usize][(m - 1) as usize]
    }

    /// Largest |row sum - 1| over all rows.
    pub fn max_row_sum_deviation(&self) -> f64 {
        self.rows
            .iter()
            .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest residual of the Pascal-triangle recursion
    /// `q(n:m) = [(m+1-rho)/(n+1-rho)] q(n+1:m+1) + [(n+1-m)/(n+1-rho)] q(n+1:m)`
    /// over all entries with `rho_k <= n < n_max`.
    pub fn max_pascal_residual(&self) -> f64 {
        let rho = self.rho_k;
        let mut worst = 0.0f64;
        for n in rho..self.n_max() {
            let denom = (n + 1 - rho) as f64;
            for m in 1..=n {
                let lhs = self.get(n, m);
                let rhs = if m + 1 >= rho {
                    ((m + 1 - rho) as f64 / denom) * self.get(n + 1, m + 1)
                        + ((n + 1 - m) as f64 / denom) * self.get(n + 1, m)
                } else {
                    ((n + 1 - m) as f64 / denom) * self.get(n + 1, m)
                };
                worst = worst.max((lhs - rhs).abs());
            }
        }
        worst
    }
}

/// Build the decrement matrix for one block index.
pub fn decrement_matrix(rho_k: u64, a: f64, b: f64, n_max: u64) -> Result<DecrementMatrix> {
    if n_max == 0 || n_max > DECREMENT_N_MAX {
        return Err(Error::SizeGuard {
            guard: "decrement_matrix",
            limit: DECREMENT_N_MAX,
            requested: n_max,
        });
    }
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "beta parameters must be positive, got ({a}, {b})"
        )));
    }
    if rho_k == 0 {
        return Err(Error::InvalidParameter("rho_k must be >= 1".into()));
    }
    let rows = (1..=n_max)
        .map(|n| (1..=n).map(|m| decrement_entry(rho_k, a, b, n, m)).collect())
        .collect();
    Ok(DecrementMatrix { rho_k, a, b, rows })
}

/// The product formula for the shape law under independent beta residual
/// fractions. Accumulates in log space and exponentiates once.
pub fn shape_probability_product(
    shape: &Composition,
    rho: &ConstraintSeq,
    model: &FrequencyModel,
) -> Result<f64> {
    shape.check_constrained(rho)?;
    if !model.has_beta_residuals() {
        return Err(Error::InvalidModel(format!(
            "product formula needs independent beta residual fractions, got {model}"
        )));
    }
    let tails = shape.tail_sums();
    let mut ln_p = 0.0f64;
    for (k, (&part, &tail)) in shape.parts().iter().zip(&tails).enumerate() {
        let (a, b) = model.residual_beta_at(k + 1).expect("beta residuals");
        match ln_decrement_entry(rho.get(k + 1), a, b, tail, part) {
            Some(v) => ln_p += v,
            None => return Ok(0.0),
        }
    }
    Ok(ln_p.exp())
}
