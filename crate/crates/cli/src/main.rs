//! `fredholm`: reproducible runs of the fredholm-core experiments.
//!
//! Every run prints one JSON document `{"manifest": ..., "result": ...}` on
//! stdout. Exit codes: 0 success, 2 usage or unreadable input, 3 numerical
//! failure, 4 input that is not Fredholm where the command requires it.

mod commands;
mod demo;
mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fredholm_core::Shape;

#[derive(Parser)]
#[command(
    name = "fredholm",
    version,
    about = "Fredholm index experiments for shift polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// All points where a monic matrix polynomial is singular.
    Witness {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Also write the JSON document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fredholm index of p(S_1), by winding number and by root count.
    Index {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Index of the rescaled polynomial over a log-spaced eps grid.
    Sweep {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        eps_min: f64,
        #[arg(long)]
        eps_max: f64,
        #[arg(long)]
        steps: usize,
        /// Evaluate grid points on all cores.
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        seed: Option<u64>,
        /// CSV with one row per grid point.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smallest singular values of square sections.
    Decay {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        seed: Option<u64>,
        /// CSV with one row per (N, track).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dense finite section of the operator, exported as CSV.
    Truncate {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long = "n")]
        size: usize,
        #[arg(long)]
        shape: Shape,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Scan z a + I over a polar grid.
    ScanNonmonic {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        grid_radius: f64,
        #[arg(long)]
        grid_steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Histogram of indices of random elements of span{S_0, ..., S_n}.
    SampleIndex {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Golden cases: shifts, S_1 - lambda on both sides of the circle, nilpotent pencil.
    Demo {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(doc) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(io::stdout().lock(), "{doc}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("fredholm: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
