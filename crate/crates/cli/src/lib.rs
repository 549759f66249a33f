//! The `zetalab` command line: argument handling, input files, reports and
//! the built-in self-test corpus.

pub mod commands;
pub mod input;
pub mod selftest;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid input: {0}")]
    Schema(String),
    #[error("no such gauge or surface: {0}")]
    UnknownName(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnknownName(_) => 2,
            _ => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "zetalab", version, about = "Special values of zeta functions of F-gauges over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Newton slopes and Hodge tables of every summand.
    Slopes(Common),
    /// Zeta factors per degree and orders of vanishing.
    Zeta(Common),
    /// p-adic size of the normalized special value (evaluation route).
    Special(Common),
    /// Bockstein complex and (stable) characteristic of a module endomorphism.
    Bockstein(Common),
    /// Both sides of the special-value formula, weight by weight.
    Verify(Common),
    /// βr(X)_p and the Artin–Tate cross-check for surfaces.
    Surface(Common),
    /// Runs the built-in corpus.
    Selftest(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Restrict to one gauge (or surface).
    #[arg(long)]
    pub gauge: Option<String>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "weights")]
    pub weight: Option<i64>,
    /// Inclusive range `A..B`.
    #[arg(long, allow_hyphen_values = true)]
    pub weights: Option<String>,
    #[arg(long)]
    pub json: bool,
    /// Also compute the stable Bockstein characteristic.
    #[arg(long)]
    pub stable: bool,
}

/// Weights requested on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weights {
    Range(i64, i64),
    /// Per gauge, from its Hodge table.
    Default,
}

impl Common {
    pub fn weights(&self) -> Result<Weights, CliError> {
        if let Some(r) = self.weight {
            return Ok(Weights::Range(r, r));
        }
        let Some(spec) = &self.weights else {
            return Ok(Weights::Default);
        };
        let bad = || CliError::Usage(format!("--weights expects A..B, got {spec:?}"));
        let (a, b) = spec.split_once("..").ok_or_else(bad)?;
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        Ok(Weights::Range(a, b))
    }
}

/// What a command prints and how the process should exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Slopes(c) => commands::slopes(c),
        Command::Zeta(c) => commands::zeta(c),
        Command::Special(c) => commands::special(c),
        Command::Bockstein(c) => commands::bockstein(c),
        Command::Verify(c) => commands::verify(c),
        Command::Surface(c) => commands::surface(c),
        Command::Selftest(c) => selftest::run(c),
    }
}
