mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use args::Cli;
use harmony_core::Error;

/// Exit codes; part of the command-line contract.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INVALID: u8 = 1;
    pub const MALFORMED: u8 = 2;
    pub const NONE: u8 = 3;
    pub const UNSUPPORTED: u8 = 4;
    pub const BUDGET: u8 = 5;
    pub const USAGE: u8 = 64;
    pub const INTERNAL: u8 = 70;
}

/// The single machine-readable record every run emits.
#[derive(Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Value,
    pub outcome: Value,
    pub exit_code: u8,
    pub artifacts: Vec<String>,
    pub wall_time_ms: f64,
}

/// What a command hands back to `main`.
pub struct Done {
    pub code: u8,
    pub inputs: Value,
    pub outcome: Value,
    pub artifacts: Vec<String>,
}

fn code_for(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<Error>() {
        return match e {
            Error::Malformed(_) | Error::Json(_) | Error::Csv(_) | Error::Io(_) => exit::MALFORMED,
            Error::Hypothesis(_) | Error::Unsupported(_) => exit::UNSUPPORTED,
            Error::BudgetExhausted { .. } => exit::BUDGET,
            Error::Internal(_) => exit::INTERNAL,
            _ => exit::USAGE,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some()
        || err.downcast_ref::<serde_json::Error>().is_some()
    {
        return exit::MALFORMED;
    }
    exit::INTERNAL
}

fn emit(report: &RunReport, path: Option<&std::path::Path>) {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    match path {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text + "\n") {
                eprintln!("cannot write report to {}: {e}", p.display());
            }
        }
        None => {
            let _ = writeln!(std::io::stdout(), "{text}");
        }
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let report = RunReport {
                command: argv,
                inputs: Value::Null,
                outcome: json!({ "status": "usage_error", "error": e.kind().to_string() }),
                exit_code: exit::USAGE,
                artifacts: Vec::new(),
                wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
            };
            emit(&report, None);
            return ExitCode::from(exit::USAGE);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("cannot configure {jobs} worker threads: {e}");
        }
    }
    let report_path = cli.report.clone();
    let done = commands::run(cli).unwrap_or_else(|err| {
        let code = code_for(&err);
        eprintln!("error: {err:#}");
        Done {
            code,
            inputs: Value::Null,
            outcome: json!({ "status": "error", "error": format!("{err:#}") }),
            artifacts: Vec::new(),
        }
    });
    let report = RunReport {
        command: argv,
        inputs: done.inputs,
        outcome: done.outcome,
        exit_code: done.code,
        artifacts: done.artifacts,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    emit(&report, report_path.as_deref());
    ExitCode::from(done.code)
}
