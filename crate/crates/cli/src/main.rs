use std::process::ExitCode;

use clap::Parser;
use parafeyn_cli::{dispatch, render_json, Cli, CliError, SEED_ENV};

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Input { path: path.display().to_string(), message: e.to_string() }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = std::env::var(SEED_ENV).ok();
    let outcome = dispatch(&cli, seed.as_deref()).and_then(|report| emit(&cli, &render_json(&report)));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if let CliError::Refusal { report, .. } = &err {
                let _ = emit(&cli, &render_json(report));
            }
            eprintln!("parafeyn: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
