use std::f64::consts::{PI, TAU};

use super::window::DEFAULT_T_MIN;
use crate::error::{Error, Result};

/// Riemann–Siegel theta function for `t >= 100`.
///
/// Asymptotic expansion
/// `(t/2) ln(t/2π) - t/2 - π/8 + 1/(48t) + 7/(5760t³)`; the first omitted
/// term is `31/(80640 t⁵)`, below `4e-15` at `t = 100`.
pub fn theta(t: f64) -> Result<f64> {
    if !(t >= DEFAULT_T_MIN) {
        return Err(Error::Domain { what: "theta expansion needs t >= T_min", value: t });
    }
    Ok(theta_unchecked(t))
}

/// The same expansion without the range check. Callers guarantee `t` is at
/// least a window's `T_min`.
pub(crate) fn theta_unchecked(t: f64) -> f64 {
    let inv = 1.0 / t;
    let inv3 = inv * inv * inv;
    0.5 * t * (t / TAU).ln() - 0.5 * t - PI / 8.0 + inv / 48.0 + 7.0 * inv3 / 5760.0
}

/// Derivative of the expansion used by [`theta`]; `≈ ½ ln(t/2π)`.
pub fn theta_prime(t: f64) -> f64 {
    let inv2 = 1.0 / (t * t);
    0.5 * (t / TAU).ln() - inv2 / 48.0 - 7.0 * inv2 * inv2 / 1920.0
}

#[cfg(test)]
mod tests {
    use super::*;

    // Im ln Γ(1/4 + it/2) - (t/2) ln π evaluated with mpmath at 40 digits.
    const THETA_1000: f64 = 2034.546428038031608703345151207598766829;
    const THETA_1E6: f64 = 5488816.353078403444882823154365663184116;

    #[test]
    fn matches_arbitrary_precision_reference() {
        assert!((theta(1000.0).unwrap() - THETA_1000).abs() <= 1e-9);
        // ulp(5.5e6) is ~1e-9; the expansion itself is far more accurate.
        assert!((theta(1.0e6).unwrap() - THETA_1E6).abs() <= 1e-8);
    }

    #[test]
    fn leading_terms_cancel_at_two_pi_e() {
        let t = TAU * std::f64::consts::E;
        let expected = -PI / 8.0 + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t.powi(3));
        assert!((theta_unchecked(t) - expected).abs() < 1e-13);
    }

    #[test]
    fn monotone_for_large_t() {
        assert!(theta(1.0e6 + 1.0).unwrap() > theta(1.0e6).unwrap());
    }

    #[test]
    fn rejects_small_t() {
        assert!(matches!(theta(99.9), Err(Error::Domain { .. })));
        assert!(theta(f64::NAN).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let t = 5.0e4;
        let h = 1e-3;
        let fd = (theta_unchecked(t + h) - theta_unchecked(t - h)) / (2.0 * h);
        assert!((fd - theta_prime(t)).abs() < 1e-7);
    }
}
