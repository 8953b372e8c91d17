use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rppa_cli::{execute, Cli, CliError};

fn emit(cli: &Cli, body: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, body).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(body.as_bytes())
            .map_err(|source| CliError::Output {
                path: "stdout".into(),
                source,
            }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli).and_then(|report| emit(&cli, &report.body).map(|()| report));
    match result {
        Ok(report) => {
            if report.violations > 0 {
                eprintln!("rppa-lab: {} violation(s)", report.violations);
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("rppa-lab: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
