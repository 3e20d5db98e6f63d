use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use super::theta::theta_unchecked;
use super::window::EvalWindow;
use crate::error::Result;

/// One term of a truncated Riemann–Siegel sum: `amplitude · cos(ϑ(t) - t ln n + …)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannSeriesTerm {
    pub n: usize,
    pub amplitude: f64,
    pub log_n: f64,
}

/// Reduces `ϑ - t ln n` to `[0, 2π)`.
///
/// The absolute error of the unreduced phase is about `ulp(t ln n)`; after
/// reduction every caller shares the same rounded value, so the `cos(·+π/2)`
/// and `-sin(·)` forms of a sum agree to rounding in the reduced argument.
#[inline]
pub(crate) fn reduced_phase(theta: f64, t: f64, log_n: f64) -> f64 {
    (theta - t * log_n).rem_euclid(TAU)
}

/// Precomputed term data for the main sums of `Z(t)` and `Z₁(t)` over one
/// window:
///
/// * `z_main(t) = 2 Σ_{n<P} n^{-1/2} cos(ϑ(t) - t ln n)`
/// * `z1(t) = 2 Σ_{n<P} n^{-1/2} ln(P/n) cos(ϑ(t) - t ln n + π/2)`
#[derive(Debug, Clone)]
pub struct RiemannSeries {
    window: EvalWindow,
    log_n: Vec<f64>,
    z_amplitude: Vec<f64>,
    z1_amplitude: Vec<f64>,
}

impl RiemannSeries {
    pub fn new(window: &EvalWindow) -> Self {
        let count = window.term_count();
        let log_p = window.log_truncation();
        let mut log_n = Vec::with_capacity(count);
        let mut z_amplitude = Vec::with_capacity(count);
        let mut z1_amplitude = Vec::with_capacity(count);
        for n in 1..=count {
            let nf = n as f64;
            let ln = nf.ln();
            let weight = 2.0 / nf.sqrt();
            log_n.push(ln);
            z_amplitude.push(weight);
            z1_amplitude.push(weight * (log_p - ln));
        }
        Self { window: *window, log_n, z_amplitude, z1_amplitude }
    }

    /// Same window and frequencies, every amplitude zero. Test hook for the
    /// degenerate constant-integrand checks.
    pub fn zeroed(window: &EvalWindow) -> Self {
        let mut series = Self::new(window);
        series.z_amplitude.iter_mut().for_each(|a| *a = 0.0);
        series.z1_amplitude.iter_mut().for_each(|a| *a = 0.0);
        series
    }

    pub fn window(&self) -> &EvalWindow {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.log_n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_n.is_empty()
    }

    pub fn log_n(&self) -> &[f64] {
        &self.log_n
    }

    pub fn z1_amplitudes(&self) -> &[f64] {
        &self.z1_amplitude
    }

    pub fn z_terms(&self) -> impl Iterator<Item = RiemannSeriesTerm> + '_ {
        Self::terms(&self.z_amplitude, &self.log_n)
    }

    pub fn z1_terms(&self) -> impl Iterator<Item = RiemannSeriesTerm> + '_ {
        Self::terms(&self.z1_amplitude, &self.log_n)
    }

    fn terms<'a>(amp: &'a [f64], log_n: &'a [f64]) -> impl Iterator<Item = RiemannSeriesTerm> + 'a {
        amp.iter()
            .zip(log_n)
            .enumerate()
            .map(|(i, (&amplitude, &log_n))| RiemannSeriesTerm { n: i + 1, amplitude, log_n })
    }

    /// `2 Σ n^{-1/2}`, the triangle-inequality bound on `|z_main|`.
    pub fn z_bound(&self) -> f64 {
        self.z_amplitude.iter().sum()
    }

    /// `2 Σ n^{-1/2} ln(P/n)`, the bound on `|z1|` and on every realization
    /// of the random-phase process.
    pub fn z1_bound(&self) -> f64 {
        self.z1_amplitude.iter().sum()
    }

    pub fn z_main(&self, t: f64) -> Result<f64> {
        self.window.check_contains(t)?;
        Ok(self.z_main_unchecked(t))
    }

    pub fn z1(&self, t: f64) -> Result<f64> {
        self.window.check_contains(t)?;
        Ok(self.z1_unchecked(t))
    }

    /// `z1` written as `-2 Σ n^{-1/2} ln(P/n) sin(ϑ(t) - t ln n)`.
    pub fn z1_sine_form(&self, t: f64) -> Result<f64> {
        self.window.check_contains(t)?;
        let theta = theta_unchecked(t);
        Ok(-self
            .z1_amplitude
            .iter()
            .zip(&self.log_n)
            .map(|(a, &ln)| a * reduced_phase(theta, t, ln).sin())
            .sum::<f64>())
    }

    pub(crate) fn z_main_unchecked(&self, t: f64) -> f64 {
        let theta = theta_unchecked(t);
        self.z_amplitude
            .iter()
            .zip(&self.log_n)
            .map(|(a, &ln)| a * reduced_phase(theta, t, ln).cos())
            .sum()
    }

    pub(crate) fn z1_unchecked(&self, t: f64) -> f64 {
        let theta = theta_unchecked(t);
        self.z1_amplitude
            .iter()
            .zip(&self.log_n)
            .map(|(a, &ln)| a * (reduced_phase(theta, t, ln) + FRAC_PI_2).cos())
            .sum()
    }

    /// `(z_main(t), z1(t))` from a single pass over the terms.
    pub(crate) fn both_unchecked(&self, t: f64) -> (f64, f64) {
        let theta = theta_unchecked(t);
        let mut z = 0.0;
        let mut z1 = 0.0;
        for ((a, b), &ln) in self.z_amplitude.iter().zip(&self.z1_amplitude).zip(&self.log_n) {
            let (s, c) = reduced_phase(theta, t, ln).sin_cos();
            z += a * c;
            z1 -= b * s;
        }
        (z, z1)
    }

    /// Reduced phases `a(t, n) = ϑ(t) - t ln n + π/2` for every term, written into `out`.
    pub(crate) fn shifted_phases(&self, t: f64, out: &mut Vec<f64>) {
        let theta = theta_unchecked(t);
        out.clear();
        out.extend(self.log_n.iter().map(|&ln| reduced_phase(theta, t, ln) + FRAC_PI_2));
    }
}

/// Main sum of `Z(t)`; `t` must lie in `window`.
pub fn z_main(t: f64, window: &EvalWindow) -> Result<f64> {
    RiemannSeries::new(window).z_main(t)
}

/// Main sum of `Z'(t)`; `t` must lie in `window`.
pub fn z1(t: f64, window: &EvalWindow) -> Result<f64> {
    RiemannSeries::new(window).z1(t)
}
