//! Command line front end: resolves flags against an optional config file,
//! runs the requested pipeline, and writes a machine-readable report.
//!
//! Reports are single JSON documents carrying a `meta` envelope (tool
//! version, command, seed, wall clock, rejection counts, and the full
//! effective config) next to the `result`. Plot data is plain CSV. Exit
//! codes: 0 success, 1 input error, 2 failed verdict, 3 numeric pathology.

mod commands;
mod config;
mod output;

use std::io::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use config::RunArgs;
use output::{Meta, Report, TOOL, VERSION};

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn verdict(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<affine_tac::Error> for CliError {
    fn from(err: affine_tac::Error) -> Self {
        let code = match &err {
            affine_tac::Error::Pathology(_) => 3,
            _ => 1,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "affine-tac",
    version,
    about = "Total absolute curvature laboratory for immersed compact manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo estimate of the total absolute curvature.
    Tac(RunArgs),
    /// Check that every sampled Morse height function has exactly two
    /// critical points.
    CertifyMinimal(RunArgs),
    /// Supporting-hyperplane convexity sweep.
    Convexity(RunArgs),
    /// Detect the affine hull and re-express the immersion inside it.
    Reduce(RunArgs),
    /// End-to-end equivalence check: minimal total curvature against
    /// convexity inside a hyperplane of the right dimension.
    Theorem(RunArgs),
    /// Degeneracy-gauge checks on the pinched revolution surface.
    Kossowski(RunArgs),
    /// Curvature and Gauss-rank grid scan for surfaces.
    GaussScan(RunArgs),
    /// List catalog entries with ground-truth metadata.
    List(RunArgs),
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}

fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests also land here; they are not errors.
            let _ = err.print();
            return if err.use_stderr() { 1 } else { 0 };
        }
    };
    let started = Instant::now();
    let (name, args) = match &cli.command {
        Command::Tac(a) => ("tac", a),
        Command::CertifyMinimal(a) => ("certify-minimal", a),
        Command::Convexity(a) => ("convexity", a),
        Command::Reduce(a) => ("reduce", a),
        Command::Theorem(a) => ("theorem", a),
        Command::Kossowski(a) => ("kossowski", a),
        Command::GaussScan(a) => ("gauss-scan", a),
        Command::List(a) => ("list", a),
    };
    match execute(name, args, started) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("affine-tac: {}", err.message);
            err.code
        }
    }
}

fn execute(name: &str, args: &RunArgs, started: Instant) -> Result<u8, CliError> {
    let cfg = config::resolve(name, args)?;
    let outcome = commands::dispatch(&cfg)?;
    let payload = match outcome.csv {
        Some(csv) => csv,
        None => {
            let meta = Meta {
                tool: TOOL,
                version: VERSION,
                command: &cfg.command,
                seed: cfg.seed,
                wall_clock_ms: started.elapsed().as_millis() as u64,
                rejections: outcome.rejections,
                config: &cfg,
            };
            output::render_json(&Report {
                meta,
                result: outcome.result,
            })
        }
    };
    write_payload(cfg.out.as_deref(), &payload)?;
    if let Some(log) = &outcome.phi_log {
        let path = cfg
            .phi_log
            .as_deref()
            .expect("log produced only when a path was given");
        std::fs::write(path, log)
            .map_err(|err| CliError::input(format!("phi log {path}: {err}")))?;
    }
    Ok(outcome.exit)
}

fn write_payload(out: Option<&str>, payload: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|err| CliError::input(format!("output {path}: {err}"))),
        None => {
            print!("{payload}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}
