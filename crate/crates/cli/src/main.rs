//! `bddg`: solve, simulate and check border defense engagements.
//!
//! Exit status: 0 ok, 1 input error, 2 outside the pursuers' winning region,
//! 3 verification failure.

mod commands;
mod policy;
mod report;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::SimulateArgs;

#[derive(Parser)]
#[command(name = "bddg", version, about = "Border defense differential game solver and simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the optimal assignment, value and capture plan as JSON.
    Solve { scenario: PathBuf },
    /// Run one engagement and print a summary line.
    Simulate {
        scenario: PathBuf,
        #[arg(long, default_value = "optimal")]
        pursuer_policy: String,
        #[arg(long, default_value = "optimal")]
        evader_policy: String,
        /// Trajectory table (CSV).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Event list (JSON).
        #[arg(long)]
        events_out: Option<PathBuf>,
        /// Run from the game-of-kind assignment when no assignment is feasible.
        #[arg(long)]
        allow_outside: bool,
    },
    /// Check HJI residual, gradients and closed-form identities on sampled states.
    Verify {
        scenario: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Overrides the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List every enumerated assignment, best first.
    Enumerate { scenario: PathBuf },
    /// Compare planned capture heights with a brute-force lattice search.
    Oracle {
        scenario: PathBuf,
        #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
        resolution: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve { scenario } => commands::solve(scenario),
        Command::Simulate { scenario, pursuer_policy, evader_policy, out, events_out, allow_outside } => {
            commands::simulate(
                scenario,
                &SimulateArgs {
                    pursuer_policy,
                    evader_policy,
                    out: out.as_deref(),
                    events_out: events_out.as_deref(),
                    allow_outside: *allow_outside,
                },
            )
        }
        Command::Verify { scenario, samples, seed } => commands::verify(scenario, *samples, *seed),
        Command::Enumerate { scenario } => commands::enumerate(scenario),
        Command::Oracle { scenario, resolution } => commands::oracle(scenario, *resolution),
    };
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
