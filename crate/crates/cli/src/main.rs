//! `epspectra` command-line front end.
//!
//! Exit status: 0 on success, 1 for domain errors (infeasible parameters,
//! no EP in the bracket, I/O failures), 2 for usage errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod output;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, ConfigFile};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(m) => f.write_str(m),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<epspectra::Error> for CliError {
    fn from(e: epspectra::Error) -> Self {
        match e {
            epspectra::Error::Usage(m) => CliError::Usage(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("EPSPECTRA_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "EPSPECTRA_THREADS must be a positive integer, got '{v}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(String, bool), CliError> {
    init_threads()?;
    let (io, summary) = match cli.command {
        Command::Spectrum { io, family, opts } => {
            let cfg = ConfigFile::load(io.config.as_deref())?;
            (
                io.out.is_some(),
                commands::spectrum(&cfg, io, family, opts)?,
            )
        }
        Command::Sweep { io, family, opts } => {
            let cfg = ConfigFile::load(io.config.as_deref())?;
            (
                io.out.is_some(),
                commands::sweep_cmd(&cfg, io, family, opts)?,
            )
        }
        Command::PhaseDiagram { io, family, opts } => {
            let cfg = ConfigFile::load(io.config.as_deref())?;
            (
                io.out.is_some(),
                commands::phase_cmd(&cfg, io, family, opts)?,
            )
        }
        Command::Ep3 { io, opts } => {
            let cfg = ConfigFile::load(io.config.as_deref())?;
            (io.out.is_some(), commands::ep3(&cfg, io, opts)?)
        }
        Command::Ep2Find { io, family, opts } => {
            let cfg = ConfigFile::load(io.config.as_deref())?;
            (io.out.is_some(), commands::ep2(&cfg, io, family, opts)?)
        }
        Command::PerturbFit { io, family, opts } => {
            let cfg = ConfigFile::load(io.config.as_deref())?;
            (io.out.is_some(), commands::perturb(&cfg, io, family, opts)?)
        }
        Command::Simulate { io, family, opts } => {
            let cfg = ConfigFile::load(io.config.as_deref())?;
            (
                io.out.is_some(),
                commands::simulate(&cfg, io, family, opts)?,
            )
        }
        Command::Check { io, family } => {
            let cfg = ConfigFile::load(io.config.as_deref())?;
            (io.out.is_some(), commands::check(&cfg, io, family)?)
        }
    };
    Ok((summary, io))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        // with data on stdout the summary goes to stderr
        Ok((summary, true)) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Ok((summary, false)) => {
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("epspectra: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
