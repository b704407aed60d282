use std::process::ExitCode;

use clap::Parser;
use supercong::args::Cli;
use supercong::{emit, run, CliError, RunConfig};

fn write_out(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let outcome = Cli::parse().into_config().and_then(|cfg| {
        let report = run(&cfg)?;
        write_out(&cfg, &emit(&report, cfg.format)?)?;
        Ok(report.exit_code())
    });
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("supercong: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
