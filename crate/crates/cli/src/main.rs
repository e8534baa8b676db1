use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use fourgeom_cli::{execute, Cli, CliError, RunConfig};

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let (command, opts) = cli.command.split();
    let result = RunConfig::resolve(command, opts).and_then(|cfg| {
        let text = execute(&cfg);
        match text {
            Ok(t) => emit(&cfg, &t),
            Err(CliError::CheckFailed(detail)) => {
                // the summary still goes out; the first line names the failure
                let (name, body) = detail.split_once('\n').unwrap_or((&detail, ""));
                emit(&cfg, body)?;
                Err(CliError::CheckFailed(name.to_string()))
            }
            Err(e) => Err(e),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fourgeom: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
