use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower bound on `T` used by [`EvalWindow::new`].
pub const DEFAULT_T_MIN: f64 = 100.0;

/// An evaluation window `[T, T + U]` together with the series truncation
/// point `P`, which stays frozen for every `t` inside the window.
///
/// Windows built with [`EvalWindow::new`] use `P = sqrt(T / 2π)`. The
/// logarithm `ln P` is stored separately and computed as
/// `(ln T - ln 2π) / 2`, so windows with astronomically large `T` still
/// carry an accurate `ln P`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalWindow {
    start: f64,
    length: f64,
    truncation: f64,
    log_truncation: f64,
    t_min: f64,
}

impl EvalWindow {
    /// Window with the default `T_min = 100`.
    pub fn new(start: f64, length: f64) -> Result<Self> {
        Self::with_t_min(start, length, DEFAULT_T_MIN)
    }

    pub fn with_t_min(start: f64, length: f64, t_min: f64) -> Result<Self> {
        if !(t_min.is_finite() && t_min > 0.0) {
            return Err(Error::InvalidWindow(format!("T_min must be positive, got {t_min}")));
        }
        let log_truncation = 0.5 * (start.ln() - TAU.ln());
        let truncation = (start / TAU).sqrt();
        Self::build(start, length, truncation, log_truncation, t_min)
    }

    /// Window whose truncation point is set explicitly instead of derived
    /// from `T`. Used by the random-phase model, where `P` only controls the
    /// number and weights of the terms.
    pub fn with_truncation(start: f64, length: f64, truncation: f64) -> Result<Self> {
        Self::build(start, length, truncation, truncation.ln(), DEFAULT_T_MIN)
    }

    /// The natural window for a given truncation point: `T = 2πP²`,
    /// `U = min(1, sqrt(T))`, and `T_min` relaxed to `T` when `T < 100`.
    /// `P` is stored exactly as given.
    pub fn for_truncation(truncation: f64) -> Result<Self> {
        let start = TAU * truncation * truncation;
        let length = start.sqrt().min(1.0);
        Self::build(start, length, truncation, truncation.ln(), start.min(DEFAULT_T_MIN))
    }

    fn build(
        start: f64,
        length: f64,
        truncation: f64,
        log_truncation: f64,
        t_min: f64,
    ) -> Result<Self> {
        if !start.is_finite() || start < t_min {
            return Err(Error::InvalidWindow(format!(
                "T must satisfy T >= T_min = {t_min}, got {start}"
            )));
        }
        if !(length.is_finite() && length > 0.0 && length <= start.sqrt()) {
            return Err(Error::InvalidWindow(format!(
                "U must satisfy 0 < U <= sqrt(T) = {}, got {length}",
                start.sqrt()
            )));
        }
        if !(truncation.is_finite() || log_truncation.is_finite()) || log_truncation <= 0.0 {
            return Err(Error::InvalidWindow(format!(
                "truncation point must satisfy P > 1, got {truncation}"
            )));
        }
        Ok(Self { start, length, truncation, log_truncation, t_min })
    }

    /// Window start `T`.
    pub fn start(&self) -> f64 {
        self.start
    }

    /// Window length `U`.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn end(&self) -> f64 {
        self.start + self.length
    }

    /// Truncation point `P` (may be `inf` for windows far beyond `f64` range
    /// of `P`; use [`Self::log_truncation`] there).
    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    /// `ln P`.
    pub fn log_truncation(&self) -> f64 {
        self.log_truncation
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t <= self.end()
    }

    /// Number of integers `n` with `1 <= n < P`.
    pub fn term_count(&self) -> usize {
        let p = self.truncation;
        if !p.is_finite() {
            return usize::MAX;
        }
        let floor = p.floor();
        let last = if floor == p { floor - 1.0 } else { floor };
        last as usize
    }

    pub(crate) fn check_contains(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::Domain { what: "t outside the evaluation window", value: t })
        }
    }
}
