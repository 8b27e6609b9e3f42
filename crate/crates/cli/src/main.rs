use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sbgm_cli::{run, Command, Overrides};

#[derive(Parser)]
#[command(name = "sbgm", version, about = "Smooth multi-impulse coplanar transfer design")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one scenario with its configured method.
    Solve(Args),
    /// Sweep the free apsis angle of a three-impulse transfer.
    Sweep(Args),
    /// Run every applicable method on one scenario.
    Compare(Args),
    /// Write a plottable trajectory.
    Sample(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Sweep step in degrees.
    #[arg(long)]
    grid_omega2_deg: Option<f64>,
    /// Number of transfer-time grid points for Lambert searches.
    #[arg(long)]
    tof_points: Option<usize>,
    /// Number of arrival-angle grid points for Lambert searches.
    #[arg(long)]
    theta_points: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Solve(a) => (Command::Solve, a),
        Cmd::Sweep(a) => (Command::Sweep, a),
        Cmd::Compare(a) => (Command::Compare, a),
        Cmd::Sample(a) => (Command::Sample, a),
    };
    let overrides = Overrides {
        grid_omega2_deg: args.grid_omega2_deg,
        tof_points: args.tof_points,
        theta_points: args.theta_points,
    };
    match run(command, &args.scenario, &args.out, &overrides) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code())
        }
    }
}
