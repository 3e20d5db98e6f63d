use super::phases::PhaseSample;
use crate::error::{Error, Result};
use crate::riemann::{EvalWindow, RiemannSeries};

/// The random-phase process
/// `Φ₁(t) = 2 Σ_{n<P} n^{-1/2} ln(P/n) cos(a(t, n) + φ_n)`,
/// `a(t, n) = ϑ(t) - t ln n + π/2`.
#[derive(Debug, Clone)]
pub struct PhaseProcess {
    series: RiemannSeries,
}

impl PhaseProcess {
    pub fn new(window: &EvalWindow) -> Self {
        Self { series: RiemannSeries::new(window) }
    }

    /// Every amplitude zero (degenerate test hook).
    pub fn zeroed(window: &EvalWindow) -> Self {
        Self { series: RiemannSeries::zeroed(window) }
    }

    pub fn window(&self) -> &EvalWindow {
        self.series.window()
    }

    pub fn amplitudes(&self) -> &[f64] {
        self.series.z1_amplitudes()
    }

    /// `2 Σ n^{-1/2} ln(P/n)`: no realization exceeds this in absolute value.
    pub fn bound(&self) -> f64 {
        self.series.z1_bound()
    }

    pub fn term_count(&self) -> usize {
        self.series.len()
    }

    fn check_len(&self, sample: &PhaseSample) -> Result<()> {
        if sample.phases.len() == self.term_count() {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected: self.term_count(), got: sample.phases.len() })
        }
    }

    pub fn phi1(&self, t: f64, sample: &PhaseSample) -> Result<f64> {
        self.window().check_contains(t)?;
        self.check_len(sample)?;
        Ok(self.phi1_unchecked(t, &sample.phases))
    }

    pub(crate) fn phi1_unchecked(&self, t: f64, phases: &[f64]) -> f64 {
        let mut shifted = Vec::with_capacity(phases.len());
        self.series.shifted_phases(t, &mut shifted);
        self.evaluate_at(&shifted, phases)
    }

    /// `Φ₁` from precomputed `a(t, n)`; used when many samples share one `t`.
    pub(crate) fn evaluate_at(&self, shifted: &[f64], phases: &[f64]) -> f64 {
        self.amplitudes()
            .iter()
            .zip(shifted)
            .zip(phases)
            .map(|((amp, a), phi)| amp * (a + phi).cos())
            .sum()
    }

    pub(crate) fn shifted_phases(&self, t: f64) -> Result<Vec<f64>> {
        self.window().check_contains(t)?;
        let mut out = Vec::with_capacity(self.term_count());
        self.series.shifted_phases(t, &mut out);
        Ok(out)
    }
}

/// `Φ₁(t)` for one phase vector.
pub fn phi1(t: f64, sample: &PhaseSample, window: &EvalWindow) -> Result<f64> {
    PhaseProcess::new(window).phi1(t, sample)
}
