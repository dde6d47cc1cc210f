//! `remnant`: figure data, measurement reports and oracle verification.

mod commands;
mod number;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use commands::CliError;

/// Exit status for command-line misuse.
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "remnant",
    version,
    about = "Collapsing measurements and the resources that survive them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Deviation of T(ϑ) for ψ(θ) and Ω+(θ) as CSV.
    Fig1 {
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// θ_i = iπ/(2K), i = 1..K.
        #[arg(long, default_value_t = 60)]
        theta_grid: usize,
        /// Points on [−π, π].
        #[arg(long, default_value_t = 721)]
        vartheta_grid: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Survival amplitude F(z, ωt) under the CM generator as CSV.
    Fig2 {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// z_i = i/K, i = 0..K−1.
        #[arg(long, default_value_t = 21)]
        z_grid: usize,
        /// Points on t ∈ [0, π].
        #[arg(long, default_value_t = 101)]
        t_grid: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Two-mode entanglement entropies of ψ and Ω+ as CSV.
    Fig3 {
        /// z_i = i/K, i = 0..K−1.
        #[arg(long, default_value_t = 200)]
        z_grid: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Collapsing measurement for a branch overlap, or an m-ary ensemble, as JSON.
    Cm {
        #[arg(long)]
        z: Option<f64>,
        /// Number of symmetric states with pairwise overlap z.
        #[arg(long)]
        m: Option<usize>,
        /// JSON file holding the Gram matrix as an array of rows.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["z", "m"])]
        gram: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Displacement metrology of collapsed hierarchical cat states as JSON.
    Hcs {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 40)]
        cutoff: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Orthogonalization race against random norm-matched 1-local Hamiltonians as JSON.
    Speedlimit {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta: f64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = remnant::dynamics::DEFAULT_EPSILON)]
        epsilon: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Cross-check closed forms against the dense oracle.
    Verify {
        #[command(flatten)]
        out: Output,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("REMNANT_THREADS") else {
        return Ok(());
    };
    let threads: usize = value.parse().map_err(|_| {
        CliError::Usage(format!(
            "REMNANT_THREADS must be a positive integer, got {value:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn dispatch(command: Command) -> Result<(), CliError> {
    configure_threads()?;
    match command {
        Command::Fig1 {
            n,
            theta_grid,
            vartheta_grid,
            out,
        } => commands::fig1(n, theta_grid, vartheta_grid, out.output.as_deref()),
        Command::Fig2 {
            n,
            omega,
            z_grid,
            t_grid,
            out,
        } => commands::fig2(n, omega, z_grid, t_grid, out.output.as_deref()),
        Command::Fig3 { z_grid, out } => commands::fig3(z_grid, out.output.as_deref()),
        Command::Cm { z, m, gram, out } => {
            commands::cm(z, m, gram.as_deref(), out.output.as_deref())
        }
        Command::Hcs {
            alpha,
            n,
            cutoff,
            out,
        } => commands::hcs(alpha, n, cutoff, out.output.as_deref()),
        Command::Speedlimit {
            n,
            theta,
            trials,
            seed,
            epsilon,
            out,
        } => commands::speedlimit(n, theta, trials, seed, epsilon, out.output.as_deref()),
        Command::Verify { out } => commands::verify(out.output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("remnant: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
