//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Command, OutputFormat, PartialConfig, RunConfig};
use crate::error::Result;

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "ZETA_ARCLEN_CACHE";

#[derive(Debug, Parser)]
#[command(name = "zeta-arclen", version, about = "Arc length of the Riemann Z-curve: numerics, random-phase model and closed forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Sub {
    /// Tabulate theta, Z and Z' on a grid over [T, T+U].
    Eval,
    /// Numeric arc length and the extrema sum over [T, T+U].
    Arclength,
    /// Monte Carlo moments, KS fit and Lyapunov ratio of the random-phase process.
    Simulate,
    /// Closed-form expectation chain for the window.
    Predict,
    /// Numeric, Monte Carlo, model and asymptotic arc lengths side by side.
    Compare,
    /// Run the acceptance suite and print a pass/fail table.
    Verify,
}

impl From<Sub> for Command {
    fn from(sub: Sub) -> Self {
        match sub {
            Sub::Eval => Command::Eval,
            Sub::Arclength => Command::Arclength,
            Sub::Simulate => Command::Simulate,
            Sub::Predict => Command::Predict,
            Sub::Compare => Command::Compare,
            Sub::Verify => Command::Verify,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Window start T.
    #[arg(long = "T", global = true, value_name = "T")]
    pub start: Option<f64>,
    /// Window length U (0 < U <= sqrt(T)).
    #[arg(long = "U", global = true, value_name = "U")]
    pub length: Option<f64>,
    /// Truncation point override (default sqrt(T/2π)).
    #[arg(long = "P", global = true, value_name = "P")]
    pub truncation: Option<f64>,
    /// Monte Carlo sample count.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Master seed; every random substream derives from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Arc-length quadrature tolerance per unit window length.
    #[arg(long, global = true)]
    pub quad_tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Critical-point cache directory (default: $ZETA_ARCLEN_CACHE).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Grid points for `eval`.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// JSON config file; unknown keys are rejected, command-line flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for the numeric kernels.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// `simulate`: also estimate E(Phi2).
    #[arg(long, global = true)]
    pub phi2: bool,
    /// `verify`: comma-separated criterion ids to run.
    #[arg(long, global = true, value_delimiter = ',')]
    pub criteria: Option<Vec<u8>>,
    #[arg(long, global = true, hide = true)]
    pub zero_series: bool,
    #[arg(long, global = true, hide = true)]
    pub corrupt_bessel: bool,
}

impl Cli {
    /// Defaults, then `--config`, then flags, then `$ZETA_ARCLEN_CACHE` for
    /// an unset cache directory.
    pub fn into_config(self) -> Result<RunConfig> {
        let o = self.options;
        let file = o.config.as_deref().map(PartialConfig::from_file).transpose()?;
        let flags = PartialConfig {
            command: None,
            start: o.start,
            length: o.length,
            truncation: o.truncation,
            samples: o.samples,
            seed: o.seed,
            quad_tol: o.quad_tol,
            grid: o.grid,
            format: o.format,
            out: o.out,
            cache: o.cache,
            phi2: o.phi2.then_some(true),
            threads: o.threads,
            criteria: o.criteria,
            zero_series: o.zero_series.then_some(true),
            corrupt_bessel: o.corrupt_bessel.then_some(true),
        };
        let mut config = RunConfig::resolve(self.command.into(), file, flags)?;
        if config.cache.is_none() {
            config.cache = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
        }
        Ok(config)
    }
}
