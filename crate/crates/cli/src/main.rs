//! `plancherel` command-line front end.

mod expect;
mod output;
mod profile;
mod seq;
mod simulate;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::output::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "plancherel",
    version,
    about = "Exact and asymptotic Plancherel averages"
)]
struct Cli {
    /// Worker threads for parallel sections.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,

    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

/// Working precision in bits, at least 64.
#[derive(clap::Args, Debug, Clone, Copy)]
pub struct Precision {
    #[arg(
        long = "precision",
        env = "PLANCHEREL_PRECISION",
        default_value_t = 256,
        value_parser = clap::value_parser!(u32).range(64..)
    )]
    pub bits: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact Plancherel expectation of a diagram functional.
    Expect(expect::Args),
    /// A sequence as CSV `n,value`.
    Seq(seq::Args),
    /// Run a validation suite; prints a JSON report.
    Validate(validate::Args),
    /// Rescaled profile `Ω̃_n(u)` against the limit shape, as CSV.
    Profile(profile::Args),
    /// Monte Carlo estimates from RSK on uniform permutations, as JSON.
    Simulate(simulate::Args),
}

fn run(cli: Cli) -> Result<(), Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers as usize)
        .build_global()
        .map_err(|e| Failure::Resource(e.to_string()))?;
    let out = cli.output.as_deref();
    match cli.command {
        Command::Expect(args) => expect::run(args, out),
        Command::Seq(args) => seq::run(args, out),
        Command::Validate(args) => validate::run(args, out),
        Command::Profile(args) => profile::run(args, out),
        Command::Simulate(args) => simulate::run(args, cli.workers, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(msg) = f.message() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(f.code())
        }
    }
}
