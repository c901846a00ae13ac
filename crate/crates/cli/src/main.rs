//! `heun-ghf`: command-line front end for the Heun reduction library.

// `!(x < y)` is deliberate throughout: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Usage,
    Shortfall,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(match s {
            Status::Ok => 0,
            Status::Usage => 1,
            Status::Shortfall => 2,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Status::Usage } else { Status::Ok }.into();
        }
    };
    env_logger::Builder::new()
        .filter_level(if cli.common.verbose { log::LevelFilter::Debug } else { log::LevelFilter::Warn })
        .format_timestamp(None)
        .init();
    let result = match &cli.command {
        Command::Reduce(a) => commands::reduce(a),
        Command::Qpoly(a) => commands::qpoly(a),
        Command::Eval(a) => commands::eval(a),
        Command::Spectrum(a) => commands::spectrum(a),
    };
    match result.and_then(|(doc, status)| {
        output::write(&doc, &cli.common)?;
        Ok(status)
    }) {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("error: {e}");
            e.status.into()
        }
    }
}
