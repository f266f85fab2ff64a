use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use slicelab::harness::commands::{exit_code, run, write_outcome, Command, Invocation};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Verify,
    Grid,
    Counterexample,
    Extend,
    Paths,
}

/// Quaternionic slice analysis: verification suites, membership rasters,
/// extensions and the branch-cut counterexample.
#[derive(Debug, Parser)]
#[command(name = "slicelab", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suite for `verify` (algebra, slice, extension, branch, counterexample, topology, witness, paths, all).
    #[arg(long)]
    suite: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    slicelab::par::init_from_env();
    let command = match cli.command {
        Cmd::Verify => Command::Verify,
        Cmd::Grid => Command::Grid,
        Cmd::Counterexample => Command::Counterexample,
        Cmd::Extend => Command::Extend,
        Cmd::Paths => Command::Paths,
    };
    let inv = Invocation { command, config: cli.config, seed: cli.seed, out: cli.out, suite: cli.suite };
    let mut result = run(&inv);
    if let Ok(o) = &result {
        if let Err(e) = write_outcome(o) {
            result = Err(e);
        }
    }
    match &result {
        Ok(o) if !o.pass => eprintln!("slicelab {}: some checks failed", command.name()),
        Ok(_) => {}
        Err(e) => eprintln!("slicelab {}: {e}", command.name()),
    }
    ExitCode::from(exit_code(&result) as u8)
}
