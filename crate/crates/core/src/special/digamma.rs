use crate::error::{Error, Result};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_431;

/// `ψ(m)` at a positive integer: `ψ(1) = -γ`, `ψ(m + 1) = ψ(m) + 1/m`.
pub fn digamma(m: u64) -> Result<f64> {
    if m < 1 {
        return Err(Error::Domain { what: "digamma needs m >= 1", value: m as f64 });
    }
    Ok(digamma_with(m, EULER_GAMMA))
}

pub(crate) fn digamma_with(m: u64, euler_gamma: f64) -> f64 {
    (1..m).fold(-euler_gamma, |psi, k| psi + 1.0 / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `ψ(x) = -γ - Σ_{k>=0} (1/(k+x) - 1/(k+1))`, truncated after `terms`.
    fn series_oracle(x: f64, terms: usize) -> f64 {
        -EULER_GAMMA - (0..terms).map(|k| 1.0 / (k as f64 + x) - 1.0 / (k as f64 + 1.0)).sum::<f64>()
    }

    #[test]
    fn first_values() {
        assert_eq!(digamma(1).unwrap(), -EULER_GAMMA);
        assert!((digamma(2).unwrap() - (1.0 - EULER_GAMMA)).abs() < 1e-15);
    }

    #[test]
    fn matches_truncated_series() {
        // The tail after N terms is about (x - 1)/N = 9e-6 here.
        let n = 1_000_000;
        let oracle = series_oracle(10.0, n);
        assert!((digamma(10).unwrap() - oracle).abs() <= 1e-5);
        // With the integral estimate ln((N + x)/(N + 1)) of the tail added back
        // the remainder is O(1/N²).
        let corrected = oracle + ((n as f64 + 10.0) / (n as f64 + 1.0)).ln();
        assert!((digamma(10).unwrap() - corrected).abs() <= 1e-6);
    }

    #[test]
    fn rejects_zero() {
        assert!(digamma(0).is_err());
    }
}
