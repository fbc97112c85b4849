mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Reach(a) => commands::reach(a),
        Command::Stratify(a) => commands::stratify_cloud(a),
        Command::Gap(a) => commands::gap(a),
        Command::Fullness(a) => commands::fullness_report(a),
        Command::Prodint(a) => commands::prodint(a),
        Command::Lipcheck(a) => commands::lipcheck(a),
        Command::Whitney(a) => commands::whitney(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("reachkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
