//! Run configuration: defaults, strict JSON config files, command-line
//! overrides, and up-front validation.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use zeta_arclen::riemann::{EvalWindow, DEFAULT_T_MIN};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Eval,
    Arclength,
    Simulate,
    Predict,
    Compare,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Eval => "eval",
            Self::Arclength => "arclength",
            Self::Simulate => "simulate",
            Self::Predict => "predict",
            Self::Compare => "compare",
            Self::Verify => "verify",
        }
    }

    /// Default Monte Carlo sample count.
    fn default_samples(self) -> usize {
        match self {
            Self::Compare => 200,
            _ => 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    #[default]
    Json,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_QUAD_TOL: f64 = 1e-6;
pub const DEFAULT_GRID: usize = 1000;

/// Fully resolved configuration of one run. Echoed verbatim into every record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(rename = "T")]
    pub start: f64,
    #[serde(rename = "U")]
    pub length: f64,
    /// Truncation override; `None` means `P = sqrt(T/2π)`.
    #[serde(rename = "P")]
    pub truncation: Option<f64>,
    pub samples: usize,
    pub seed: u64,
    /// Arc-length quadrature tolerance per unit window length.
    pub quad_tol: f64,
    pub grid: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    /// `simulate`: also estimate `E Φ₂`.
    pub phi2: bool,
    pub threads: Option<usize>,
    /// `verify`: criterion ids to run; empty runs all.
    pub criteria: Vec<u8>,
    /// Test hook: integrate with all series amplitudes zeroed.
    pub zero_series: bool,
    /// Test hook: perturb Euler's constant inside the Bessel series.
    pub corrupt_bessel: bool,
}

/// A set of optional settings, as read from a config file or the command
/// line. Unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub command: Option<Command>,
    #[serde(rename = "T")]
    pub start: Option<f64>,
    #[serde(rename = "U")]
    pub length: Option<f64>,
    #[serde(rename = "P")]
    pub truncation: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub quad_tol: Option<f64>,
    pub grid: Option<usize>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub phi2: Option<bool>,
    pub threads: Option<usize>,
    pub criteria: Option<Vec<u8>>,
    pub zero_series: Option<bool>,
    pub corrupt_bessel: Option<bool>,
}

impl PartialConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::Validation(format!("config file: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io("reading config", path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            HarnessError::Validation(msg) => HarnessError::Validation(format!("{msg} ({})", path.display())),
            other => other,
        })
    }

    /// Values set in `other` win.
    fn overlay(self, other: Self) -> Self {
        Self {
            command: other.command.or(self.command),
            start: other.start.or(self.start),
            length: other.length.or(self.length),
            truncation: other.truncation.or(self.truncation),
            samples: other.samples.or(self.samples),
            seed: other.seed.or(self.seed),
            quad_tol: other.quad_tol.or(self.quad_tol),
            grid: other.grid.or(self.grid),
            format: other.format.or(self.format),
            out: other.out.or(self.out),
            cache: other.cache.or(self.cache),
            phi2: other.phi2.or(self.phi2),
            threads: other.threads.or(self.threads),
            criteria: other.criteria.or(self.criteria),
            zero_series: other.zero_series.or(self.zero_series),
            corrupt_bessel: other.corrupt_bessel.or(self.corrupt_bessel),
        }
    }
}

impl RunConfig {
    /// Defaults for `command`.
    pub fn new(command: Command) -> Self {
        Self {
            command,
            start: 1.0e6,
            length: 1.0,
            truncation: None,
            samples: command.default_samples(),
            seed: DEFAULT_SEED,
            quad_tol: DEFAULT_QUAD_TOL,
            grid: DEFAULT_GRID,
            format: OutputFormat::Json,
            out: None,
            cache: None,
            phi2: false,
            threads: None,
            criteria: Vec::new(),
            zero_series: false,
            corrupt_bessel: false,
        }
    }

    /// Defaults, then the config file, then command-line values.
    pub fn resolve(command: Command, file: Option<PartialConfig>, cli: PartialConfig) -> Result<Self> {
        let merged = file.unwrap_or_default().overlay(cli);
        if let Some(named) = merged.command {
            if named != command {
                return Err(HarnessError::Validation(format!(
                    "config file is for command `{}` but `{}` was requested",
                    named.name(),
                    command.name()
                )));
            }
        }
        let d = Self::new(command);
        Ok(Self {
            command,
            start: merged.start.unwrap_or(d.start),
            length: merged.length.unwrap_or(d.length),
            truncation: merged.truncation,
            samples: merged.samples.unwrap_or(d.samples),
            seed: merged.seed.unwrap_or(d.seed),
            quad_tol: merged.quad_tol.unwrap_or(d.quad_tol),
            grid: merged.grid.unwrap_or(d.grid),
            format: merged.format.unwrap_or(d.format),
            out: merged.out,
            cache: merged.cache,
            phi2: merged.phi2.unwrap_or(false),
            threads: merged.threads,
            criteria: merged.criteria.unwrap_or_default(),
            zero_series: merged.zero_series.unwrap_or(false),
            corrupt_bessel: merged.corrupt_bessel.unwrap_or(false),
        })
    }

    /// The evaluation window, or the precondition it violates.
    pub fn window(&self) -> Result<EvalWindow> {
        let (t, u) = (self.start, self.length);
        if !t.is_finite() || t < DEFAULT_T_MIN {
            return Err(invalid(format!("T must be finite and >= T_min = {DEFAULT_T_MIN}, got {t}")));
        }
        if !(u > 0.0 && u <= t.sqrt()) {
            return Err(invalid(format!("U must satisfy 0 < U <= sqrt(T) = {}, got {u}", t.sqrt())));
        }
        let window = match self.truncation {
            Some(p) if !(p.is_finite() && p > 1.0) => {
                return Err(invalid(format!("P must be finite and > 1, got {p}")));
            }
            Some(p) => EvalWindow::with_truncation(t, u, p),
            None => EvalWindow::new(t, u),
        };
        window.map_err(|e| invalid(e.to_string()))
    }

    /// Checks every precondition the selected command feeds into.
    pub fn validate(&self) -> Result<()> {
        if let Some(threads) = self.threads {
            if threads == 0 {
                return Err(invalid("threads must be >= 1, got 0".into()));
            }
        }
        if self.command == Command::Verify {
            if let Some(bad) = self.criteria.iter().find(|&&c| !(1..=9).contains(&c)) {
                return Err(invalid(format!("criteria ids must lie in 1..=9, got {bad}")));
            }
            return Ok(());
        }
        let window = self.window()?;
        if !(self.quad_tol > 0.0 && self.quad_tol < 1.0) {
            return Err(invalid(format!("quad_tol must satisfy 0 < quad_tol < 1, got {}", self.quad_tol)));
        }
        if self.samples < 2 {
            return Err(invalid(format!("samples must be >= 2, got {}", self.samples)));
        }
        if self.grid == 0 {
            return Err(invalid("grid must be >= 1, got 0".into()));
        }
        let needs_model = matches!(self.command, Command::Predict | Command::Compare)
            || (self.command == Command::Simulate && self.phi2);
        if needs_model && !(window.log_truncation() > 1.0) {
            return Err(invalid(format!(
                "the Gaussian model needs ln P > 1, got ln P = {}",
                window.log_truncation()
            )));
        }
        Ok(())
    }
}

fn invalid(message: String) -> HarnessError {
    HarnessError::Validation(message)
}
