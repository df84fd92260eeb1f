// `!(a < b)` also rejects NaN, which is the point wherever it appears
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::merge;
use error::CliError;

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Trace(a) => {
            let cfg = a.io.config.clone();
            commands::trace::run(merge(a, cfg.as_deref())?)
        }
        Command::Reaper(a) => {
            let cfg = a.io.config.clone();
            commands::curve::run_reaper(merge(a, cfg.as_deref())?)
        }
        Command::Minimal(a) => {
            let cfg = a.io.config.clone();
            commands::curve::run_minimal(merge(a, cfg.as_deref())?)
        }
        Command::Mesh(a) => {
            let cfg = a.io.config.clone();
            commands::mesh::run(merge(a, cfg.as_deref())?)
        }
        Command::Portrait(a) => {
            let cfg = a.io.config.clone();
            commands::portrait::run(merge(a, cfg.as_deref())?)
        }
        Command::Sweep(a) => {
            let cfg = a.io.config.clone();
            commands::sweep::run(merge(a, cfg.as_deref())?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
