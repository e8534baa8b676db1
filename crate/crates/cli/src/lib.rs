//! Command-line front end for the `fourgeom` curvature library.
//!
//! Every command renders its report to a string; `execute` runs it under the
//! configured thread budget. Reports carry `schema: 1`.

pub mod commands;
pub mod config;
pub mod error;
pub mod registry;
pub mod selfcheck;

use std::fmt::Write as _;

use fourgeom::algebra::ThooftTables;

pub use config::{Cli, Command, Format, Opts, RunConfig};
pub use error::{CliError, CliResult};

pub fn cmd_check(cfg: &RunConfig) -> CliResult<String> {
    let tables = if cfg.inject_eta_flip { selfcheck::flipped_tables() } else { ThooftTables::default() };
    let summary = selfcheck::run_suite(cfg.tol, cfg.seed, &tables)?;
    let text = match cfg.format {
        Format::Json => commands::to_json(&summary)?,
        Format::Csv => {
            let mut out = String::from("check,value,tolerance,pass\n");
            for c in &summary.checks {
                let _ = writeln!(out, "{},{:e},{:e},{}", c.name, c.value, c.tolerance, c.pass);
            }
            out
        }
    };
    match summary.first_failure {
        Some(name) => Err(CliError::CheckFailed(format!("{name}\n{text}"))),
        None => Ok(text),
    }
}

fn dispatch(cfg: &RunConfig) -> CliResult<String> {
    match cfg.command {
        Command::Analyze => commands::cmd_analyze(cfg),
        Command::Invariants => commands::cmd_invariants(cfg),
        Command::Sweep => commands::cmd_sweep(cfg),
        Command::Deform => commands::cmd_deform(cfg),
        Command::Shoot => commands::cmd_shoot(cfg),
        Command::Check => cmd_check(cfg),
    }
}

/// Runs the configured command inside a pool of `cfg.threads` workers.
pub fn execute(cfg: &RunConfig) -> CliResult<String> {
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))?
            .install(|| dispatch(cfg)),
        None => dispatch(cfg),
    }
}
