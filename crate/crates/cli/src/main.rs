//! `ookwire`: command-line front end for the OOK wiretap link planner.
//!
//! Results go to stdout as one JSON object `{config, result, provenance}`
//! (or to `--json PATH`). Sweeps write CSV to `--out` or stdout. Exit code 2
//! means the arguments were rejected, 1 means the request has no answer
//! (infeasible, unattainable, or an I/O failure).

mod args;
mod commands;
mod output;
mod range;
mod svg;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use crate::args::Cli;

/// An argument the core library does not see but still rejects.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn classify(err: &anyhow::Error) -> (&'static str, u8) {
    use ookwire_core::Error as E;
    if err.downcast_ref::<UsageError>().is_some() {
        return ("invalid-argument", 2);
    }
    match err.downcast_ref::<E>() {
        Some(E::InvalidParameter { .. } | E::ProbabilityOutOfRange { .. }) => ("invalid-argument", 2),
        Some(E::Infeasible(_)) => ("infeasible", 1),
        Some(E::Unattainable(_)) => ("unattainable", 1),
        Some(E::BracketFailure { .. }) => ("bracket-failure", 1),
        Some(E::DegenerateTally(_)) => ("degenerate-tally", 1),
        _ => ("io", 1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (kind, code) = classify(&err);
            eprintln!("error: {err:#}");
            let obj = json!({
                "config": &cli.command,
                "error": { "kind": kind, "message": format!("{err:#}"), "exit_code": code },
                "provenance": output::provenance(&cli.command, None),
            });
            // Best effort: the error has already been reported on stderr.
            let _ = output::emit_json(&obj, cli.command.physical().json.as_deref());
            ExitCode::from(code)
        }
    }
}
