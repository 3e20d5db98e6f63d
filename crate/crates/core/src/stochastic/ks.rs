use std::f64::consts::SQRT_2;

use super::moments::variance_exact;
use super::montecarlo::phi1_samples;
use super::phases::McConfig;
use crate::error::{Error, Result};
use crate::riemann::EvalWindow;

/// Calibrated Kolmogorov–Smirnov threshold for `P = 200`, `N = 10⁴`.
///
/// Pilot runs at that setting gave distances of 0.013–0.016; 0.05 leaves
/// room for seed-to-seed variation while still rejecting a wrong variance.
pub const KS_THRESHOLD: f64 = 0.05;

/// Minimum sample count for [`distribution_check`].
pub const KS_MIN_SAMPLES: usize = 1000;

/// `Φ(x/σ)` for a zero-mean normal with the given variance.
pub fn normal_cdf(x: f64, variance: f64) -> f64 {
    0.5 * libm::erfc(-x / (SQRT_2 * variance.sqrt()))
}

/// One-sample Kolmogorov–Smirnov distance `sup |F_n(x) - F(x)|`.
pub fn ks_distance(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0, |acc: f64, (i, &x)| {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        acc.max(above).max(below)
    })
}

/// KS distance between `Φ₁(t)` samples and `N(0, variance_exact)`.
pub fn distribution_check(t: f64, window: &EvalWindow, config: &McConfig) -> Result<f64> {
    distribution_check_against(t, window, config, variance_exact(window))
}

/// KS distance against a caller-supplied variance.
pub fn distribution_check_against(t: f64, window: &EvalWindow, config: &McConfig, variance: f64) -> Result<f64> {
    if config.sample_count < KS_MIN_SAMPLES {
        return Err(Error::InvalidConfig(format!(
            "distribution check needs at least {KS_MIN_SAMPLES} samples, got {}",
            config.sample_count
        )));
    }
    let values = phi1_samples(t, window, config)?;
    Ok(ks_distance(&values, |x| normal_cdf(x, variance)))
}
