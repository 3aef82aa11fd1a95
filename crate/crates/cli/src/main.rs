//! `fdl`: command-line front end for the laboratory.
//!
//! Exit codes: 0 success, 1 validation failure, 2 numeric guard, 64 usage.

mod commands;
mod config;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use commands::{CmdError, Output};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "fdl", version, about = "Fourier decay of fractal measures: bounds, scans and diagnostics")]
struct Cli {
    /// Seed for every random choice of the run
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default: fdl-out/<subcommand>)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON object of parameters; explicit flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lower/upper decay exponents over an α grid plus implied thresholds
    Bounds(commands::BoundsFlags),
    /// Spherical-average decay curve of a measure and its fitted exponent
    DecayScan(commands::DecayFlags),
    /// Lattice Knapp example: phase certificate, extension ratio, implied β
    Knapp(commands::KnappFlags),
    /// Transversality, scale ladder and decomposition probe demos
    Caps(commands::CapsFlags),
    /// Maximal Schrödinger scaling experiment on a fractal support
    Evolve(commands::EvolveFlags),
    /// Built-in arithmetic checks
    Selftest,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Bounds(_) => "bounds",
            Command::DecayScan(_) => "decay-scan",
            Command::Knapp(_) => "knapp",
            Command::Caps(_) => "caps",
            Command::Evolve(_) => "evolve",
            Command::Selftest => "selftest",
        }
    }
}

/// What `config.json` records: everything needed to reproduce the outputs.
#[derive(Serialize)]
struct Echo<'a, T> {
    subcommand: &'a str,
    params: &'a T,
}

fn execute<T: Serialize>(
    name: &str,
    cfg: &T,
    out: &Output,
    f: impl FnOnce(&T, &Output) -> commands::CmdResult,
) -> commands::CmdResult {
    out.json("config.json", &Echo { subcommand: name, params: cfg })?;
    f(cfg, out)
}

fn run(cli: Cli) -> commands::CmdResult {
    if let Some(n) = std::env::var("FDL_THREADS").ok().filter(|s| !s.is_empty()) {
        let n: usize = n
            .parse()
            .map_err(|_| CmdError::Validation(format!("FDL_THREADS must be a positive integer, got {n:?}")))?;
        if n == 0 {
            return Err(CmdError::Validation("FDL_THREADS must be positive".into()));
        }
        // fails only if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let file = config::load_config(cli.config.as_deref()).map_err(CmdError::Validation)?;
    let name = cli.command.name();
    let out = Output::new(&cli.out.clone().unwrap_or_else(|| PathBuf::from("fdl-out").join(name)))?;
    let seed = cli.seed;
    let resolve_err = CmdError::Validation;
    match &cli.command {
        Command::Bounds(f) => {
            let cfg = config::resolve(f, seed, &file).map_err(resolve_err)?;
            execute(name, &cfg, &out, commands::bounds)
        }
        Command::DecayScan(f) => {
            let cfg = config::resolve(f, seed, &file).map_err(resolve_err)?;
            execute(name, &cfg, &out, commands::decay_scan)
        }
        Command::Knapp(f) => {
            let cfg = config::resolve(f, seed, &file).map_err(resolve_err)?;
            execute(name, &cfg, &out, commands::knapp)
        }
        Command::Caps(f) => {
            let cfg = config::resolve(f, seed, &file).map_err(resolve_err)?;
            execute(name, &cfg, &out, commands::caps)
        }
        Command::Evolve(f) => {
            let cfg = config::resolve(f, seed, &file).map_err(resolve_err)?;
            execute(name, &cfg, &out, commands::evolve)
        }
        Command::Selftest => {
            let cfg: commands::SelftestConfig = config::resolve(&(), seed, &file).map_err(resolve_err)?;
            execute(name, &cfg, &out, |_, o| commands::selftest(o))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CmdError::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(CmdError::Guard(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
