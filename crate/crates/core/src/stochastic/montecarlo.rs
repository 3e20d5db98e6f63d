use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::phases::{fill_phases, McConfig};
use super::process::PhaseProcess;
use crate::error::{Error, Result};
use crate::riemann::{integrate_window, ArcLengthOptions, EvalWindow};

/// Monte Carlo mean and variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// `sqrt(variance / count)`.
    pub std_error: f64,
    pub count: usize,
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn of(values: &[f64]) -> Self {
        values.iter().fold(Self::default(), |mut acc, &x| {
            acc.count += 1;
            let delta = x - acc.mean;
            acc.mean += delta / acc.count as f64;
            acc.m2 += delta * (x - acc.mean);
            acc
        })
    }

    fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let weight = other.count as f64 / count as f64;
        Self {
            count,
            mean: self.mean + delta * weight,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * weight,
        }
    }
}

impl McEstimate {
    /// Batched reduction: each run of `batch_size` values is reduced on its
    /// own, then batches are merged in order. The result depends only on the
    /// values and the batch size.
    pub fn from_samples(values: &[f64], batch_size: usize) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidConfig(format!("need at least 2 samples, got {}", values.len())));
        }
        let batch = batch_size.max(1);
        let partials: Vec<Moments> = values.par_chunks(batch).map(Moments::of).collect();
        let total = partials.into_iter().fold(Moments::default(), Moments::merge);
        let variance = (total.m2 / (total.count - 1) as f64).max(0.0);
        Ok(Self {
            mean: total.mean,
            variance,
            std_error: (variance / total.count as f64).sqrt(),
            count: total.count,
        })
    }
}

/// Standard error of the sample variance, `sqrt((m₄ - s⁴)/N)` with the
/// sample fourth central moment `m₄`.
pub fn variance_std_error(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (m2, m4) = values.iter().fold((0.0, 0.0), |(m2, m4), &x| {
        let d2 = (x - mean) * (x - mean);
        (m2 + d2, m4 + d2 * d2)
    });
    let (m2, m4) = (m2 / n, m4 / n);
    ((m4 - m2 * m2).max(0.0) / n).sqrt()
}

/// `Φ₁(t)` for samples `0..sample_count`, in index order.
pub fn phi1_samples(t: f64, window: &EvalWindow, config: &McConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let process = PhaseProcess::new(window);
    let shifted = process.shifted_phases(t)?;
    let count = process.term_count();
    Ok((0..config.sample_count)
        .into_par_iter()
        .map_init(Vec::new, |phases, i| {
            fill_phases(count, config.master_seed, i as u64, phases);
            process.evaluate_at(&shifted, phases)
        })
        .collect())
}

/// Monte Carlo mean and variance of `Φ₁(t)`.
pub fn mc_moments(t: f64, window: &EvalWindow, config: &McConfig) -> Result<McEstimate> {
    let values = phi1_samples(t, window, config)?;
    McEstimate::from_samples(&values, config.batch_size)
}

/// Monte Carlo estimate of `E Φ₂` together with quadrature diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phi2Estimate {
    pub estimate: McEstimate,
    pub failures: usize,
    pub min_value: f64,
    pub total_evaluations: usize,
}

/// Largest tolerated fraction of realizations whose quadrature fails.
pub const MAX_FAILURE_FRACTION: f64 = 0.01;

/// `Φ₂ = ∫ sqrt(1 + Φ₁(t)²) dt` for each realization, integrated with the
/// same panel quadrature as the deterministic arc length.
pub fn phi2_mc(window: &EvalWindow, config: &McConfig) -> Result<Phi2Estimate> {
    phi2_mc_with(window, config, &ArcLengthOptions::default())
}

pub fn phi2_mc_with(window: &EvalWindow, config: &McConfig, options: &ArcLengthOptions) -> Result<Phi2Estimate> {
    config.validate()?;
    let process = if options.zero_series { PhaseProcess::zeroed(window) } else { PhaseProcess::new(window) };
    let count = process.term_count();
    let outcomes: Vec<Result<(f64, usize)>> = (0..config.sample_count)
        .into_par_iter()
        .map(|i| {
            let mut phases = Vec::with_capacity(count);
            fill_phases(count, config.master_seed, i as u64, &mut phases);
            let integrand = |t: f64| process.phi1_unchecked(t, &phases).hypot(1.0);
            integrate_window(&integrand, window, options).map(|q| (q.value, q.evaluations))
        })
        .collect();
    let failures = outcomes.iter().filter(|o| o.is_err()).count();
    if failures as f64 > MAX_FAILURE_FRACTION * config.sample_count as f64 {
        return Err(Error::TooManyFailures { failed: failures, total: config.sample_count });
    }
    let ok: Vec<(f64, usize)> = outcomes.into_iter().filter_map(|o| o.ok()).collect();
    let values: Vec<f64> = ok.iter().map(|&(v, _)| v).collect();
    Ok(Phi2Estimate {
        estimate: McEstimate::from_samples(&values, config.batch_size)?,
        failures,
        min_value: values.iter().copied().fold(f64::INFINITY, f64::min),
        total_evaluations: ok.iter().map(|&(_, e)| e).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batched_reduction_matches_two_pass() {
        let values: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1 - 3.0).collect();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        for batch in [1, 7, 64, 5000] {
            let e = McEstimate::from_samples(&values, batch).unwrap();
            assert!((e.mean - mean).abs() < 1e-12);
            assert!((e.variance - var).abs() < 1e-10);
            assert!((e.std_error - (var / n).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_single_sample() {
        assert!(McEstimate::from_samples(&[1.0], 4).is_err());
    }

    #[test]
    fn two_sample_fixture_is_recomputable() {
        let w = EvalWindow::for_truncation(100.0).unwrap();
        let c = McConfig::new(2, 2024).unwrap();
        let values = phi1_samples(w.start(), &w, &c).unwrap();
        let e = mc_moments(w.start(), &w, &c).unwrap();
        let mean = 0.5 * (values[0] + values[1]);
        assert_eq!(e.count, 2);
        assert!((e.mean - mean).abs() < 1e-12);
        assert!((e.variance - 0.5 * (values[0] - values[1]).powi(2)).abs() < 1e-9);
        assert_eq!(e, mc_moments(w.start(), &w, &c).unwrap());
    }

    #[test]
    fn zero_series_phi2_is_window_length() {
        let w = EvalWindow::new(1.0e6, 1.0).unwrap();
        let c = McConfig::new(8, 1).unwrap();
        let options = ArcLengthOptions { zero_series: true, ..Default::default() };
        let r = phi2_mc_with(&w, &c, &options).unwrap();
        assert!((r.estimate.mean - 1.0).abs() < 1e-9);
        assert!(r.estimate.variance < 1e-20);
        assert_eq!(r.failures, 0);
    }
}
