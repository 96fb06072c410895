use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use f2sum_cli::{run, ExperimentConfig};

fn main() -> ExitCode {
    let config = ExperimentConfig::parse();
    let output = match run(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    let written = match &config.out {
        Some(path) => fs::write(path, &output.data),
        None => std::io::stdout().write_all(&output.data),
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(2);
    }
    if output.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("assertion failure, see report");
        ExitCode::from(1)
    }
}
