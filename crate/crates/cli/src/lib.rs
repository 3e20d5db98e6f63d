//! Experiment harness for `zeta-arclen`: configuration, commands, result
//! records, the critical-point cache and the acceptance suite.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cache;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod record;
pub mod verify;

pub use config::{Command, OutputFormat, RunConfig};
pub use error::{HarnessError, Result};
pub use record::ResultRecord;

/// Runs a computational command (anything but `verify`) on a config that
/// has already been validated.
pub fn execute(config: &RunConfig) -> Result<ResultRecord> {
    match config.command {
        Command::Eval => commands::cmd_eval(config),
        Command::Arclength => commands::cmd_arclength(config),
        Command::Simulate => commands::cmd_simulate(config),
        Command::Predict => commands::cmd_predict(config),
        Command::Compare => commands::cmd_compare(config),
        Command::Verify => {
            let (record, failed) = verify::cmd_verify(config)?;
            if failed.is_empty() {
                Ok(record)
            } else {
                Err(verify::failure(&failed))
            }
        }
    }
}

/// Validates, runs and writes out one command.
pub fn run(config: RunConfig) -> Result<()> {
    config.validate()?;
    let work = || -> Result<()> {
        if config.command == Command::Verify {
            let (record, failed) = verify::cmd_verify(&config)?;
            if config.out.is_some() {
                record.emit()?;
            }
            return if failed.is_empty() { Ok(()) } else { Err(verify::failure(&failed)) };
        }
        execute(&config)?.emit()
    };
    match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| HarnessError::Validation(format!("cannot start {n} worker threads: {e}")))?
            .install(work),
        None => work(),
    }
}
