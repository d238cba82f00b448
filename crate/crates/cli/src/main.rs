mod args;
mod commands;
mod files;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use files::InputError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Plan(a) => commands::plan(a),
        Command::Compare(a) => commands::compare_cmd(a),
        Command::Derive(a) => commands::derive(a),
        Command::Simulate(a) => commands::simulate_cmd(a),
        Command::Validate(a) => commands::validate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<InputError>().is_some() => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
