use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stmr_sim::commands::{self, CliError, Grid};

/// Optic-flow peak-tracking swarm simulator.
#[derive(Parser)]
#[command(name = "stmr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and export its trajectory, switches and metrics.
    Simulate {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Let agents switch target whenever the flow peak moves.
        #[arg(long)]
        no_dwell_enforce: bool,
    },
    /// Run several models from the same initial conditions.
    Compare {
        config: PathBuf,
        /// Comma-separated: stmr, stmr_mc, vicsek, cucker_smale, wfi.
        #[arg(long)]
        models: String,
        /// Only agent 0 is controlled; the rest hold their heading.
        #[arg(long)]
        single_agent: bool,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Tabulate eigenvalues of the linearized two-agent pursuit.
    Stability {
        #[arg(long, default_value = "0.01:10:4")]
        ka: Grid,
        #[arg(long, default_value = "0.01:10:4")]
        alpha: Grid,
        /// Write the table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run seeds 0..K of a scenario and summarize the end states.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        seeds: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Simulate {
            config,
            out,
            no_dwell_enforce,
        } => {
            let s = commands::simulate(&config, &out, no_dwell_enforce)?;
            println!(
                "{} snapshots, {} accepted switches -> {}",
                s.snapshots,
                s.accepted_switches,
                out.display()
            );
        }
        Command::Compare {
            config,
            models,
            single_agent,
            out,
        } => {
            let kinds = commands::parse_models(&models)?;
            for dir in commands::compare(&config, &kinds, single_agent, &out)? {
                println!("{}", dir.display());
            }
        }
        Command::Stability { ka, alpha, out } => match out {
            Some(path) => commands::stability(&ka, &alpha, std::fs::File::create(path)?)?,
            None => commands::stability(&ka, &alpha, io::stdout().lock())?,
        },
        Command::Sweep { config, seeds, out } => {
            let rows = commands::sweep(&config, seeds, &out)?;
            println!(
                "{} seeds -> {}",
                rows.len(),
                out.join("sweep.csv").display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
