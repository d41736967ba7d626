//! Small special-function helpers on top of statrs.

use statrs::function::gamma::ln_gamma;

/// Trigamma function psi'(x) for x > 0: recurrence down from the
/// asymptotic region, then the standard asymptotic expansion.
pub fn trigamma(x: f64) -> f64 {
    assert!(x > 0.0, "trigamma needs x > 0");
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    // psi'(x) ~ 1/x + 1/(2x^2) + sum B_2k / x^(2k+1)
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let tail = inv
        + 0.5 * inv2
        + inv2
            * inv
            * (1.0 / 6.0
                - inv2
                    * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * 5.0 / 66.0))));
    acc + tail
}

/// ln of the rising factorial (x)_m = x (x+1) ... (x+m-1).
pub fn ln_rising(x: f64, m: u64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    ln_gamma(x + m as f64) - ln_gamma(x)
}

/// ln of the binomial coefficient C(n, k) for k <= n.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn trigamma_known_values() {
        // psi'(1) = pi^2/6, psi'(2) = pi^2/6 - 1, psi'(1/2) = pi^2/2.
        assert!((trigamma(1.0) - PI * PI / 6.0).abs() < 1e-12);
        assert!((trigamma(2.0) - (PI * PI / 6.0 - 1.0)).abs() < 1e-12);
        assert!((trigamma(0.5) - PI * PI / 2.0).abs() < 1e-12);
        // Recurrence psi'(x) = psi'(x+1) + 1/x^2 across the cutover.
        for x in [0.3, 1.7, 5.9, 7.99, 25.0] {
            assert!(
                (trigamma(x) - (trigamma(x + 1.0) + 1.0 / (x * x))).abs() < 1e-12,
                "x = {x}"
            );
        }
    }

    #[test]
    fn rising_factorial_matches_direct_product() {
        for &x in &[0.5, 1.0, 2.25] {
            for m in 0..8u64 {
                let direct: f64 = (0..m).map(|i| x + i as f64).product();
                assert!((ln_rising(x, m) - direct.ln()).abs() < 1e-12 || m == 0);
            }
        }
    }

    #[test]
    fn ln_binomial_matches_exact() {
        assert!((ln_binomial(7, 2) - 21f64.ln()).abs() < 1e-12);
        assert!((ln_binomial(10, 0)).abs() < 1e-12);
    }
}
