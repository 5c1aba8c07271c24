use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

/// Two-sided error level of every reported interval.
pub const CI_ALPHA: f64 = 1e-3;

/// Exact (Clopper–Pearson) interval for a binomial proportion with
/// `successes` out of `trials`, at level `1 − alpha`.
pub fn clopper_pearson(successes: u64, trials: u64, alpha: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(Error::InvalidArgument(format!(
            "need 0 ≤ successes ≤ trials with trials ≥ 1, got {successes}/{trials}"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let (x, n) = (successes as f64, trials as f64);
    let lo = if successes == 0 {
        0.0
    } else {
        beta_quantile(x, n - x + 1.0, alpha / 2.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        beta_quantile(x + 1.0, n - x, 1.0 - alpha / 2.0)
    };
    Ok((lo, hi))
}

/// Inverse of the regularized incomplete beta function by bisection.
fn beta_quantile(a: f64, b: f64, p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_reg(a, b, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brackets_the_estimate() {
        for (x, n) in [(0, 10), (3, 10), (10, 10), (17, 1_000_000), (500, 1000)] {
            let (lo, hi) = clopper_pearson(x, n, CI_ALPHA).unwrap();
            let p = x as f64 / n as f64;
            assert!(lo <= p && p <= hi, "{x}/{n}: [{lo}, {hi}]");
        }
    }

    #[test]
    fn zero_successes_closed_form() {
        // upper limit solves (1 − p)^n = α/2
        let n = 1000;
        let (_, hi) = clopper_pearson(0, n, 0.05).unwrap();
        assert!((hi - (1.0 - 0.025f64.powf(1.0 / n as f64))).abs() < 1e-12);
        let (lo, _) = clopper_pearson(n, n, 0.05).unwrap();
        assert!((lo - 0.025f64.powf(1.0 / n as f64)).abs() < 1e-12);
    }

    #[test]
    fn known_interval() {
        // x = 5, n = 20, 95%: [0.0866, 0.4910]
        let (lo, hi) = clopper_pearson(5, 20, 0.05).unwrap();
        assert!((lo - 0.086_57).abs() < 1e-4);
        assert!((hi - 0.491_04).abs() < 1e-4);
        assert!(clopper_pearson(3, 2, 0.05).is_err());
    }
}
