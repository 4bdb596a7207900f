mod commands;
mod model_file;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Parser)]
#[command(
    name = "nonnoether",
    version,
    about = "Checks for non-Noether symmetries of Hamiltonian systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Built-in model: toda2..toda5, toda:<n>, kdv, mkdv.
    #[arg(long, global = true, conflicts_with = "file")]
    pub model: Option<String>,
    /// JSON model file.
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
    /// Numeric tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Number of random sample points.
    #[arg(long, global = true, default_value_t = 100)]
    pub points: usize,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Final time.
    #[arg(long = "T", global = true)]
    pub t_end: Option<f64>,
    /// Time step.
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// PDE grid size.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Write the JSON report to this path (`-` for stdout).
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    #[value(name = "Y")]
    Y,
    #[value(name = "C")]
    C,
    #[value(name = "I")]
    I,
    #[value(name = "roots")]
    Roots,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Symmetry, Noether, Yang-Baxter and bi-Hamiltonian checks.
    Symcheck,
    /// Conserved quantities of one family.
    Conslaws {
        #[arg(long, value_enum, default_value = "Y")]
        family: Family,
        /// Number of power sums for the I family (default n).
        #[arg(long)]
        count: Option<usize>,
    },
    /// Lax pair and its residual.
    Lax,
    /// The second differential and the Lenard relations.
    Bidiff,
    /// Recursion operator, its torsion and invariance.
    Fnop,
    /// Orbit of an invariant under the seed field W(s).
    Orbit {
        /// Starting invariant (default: sum of the first n coordinates).
        #[arg(long)]
        j: Option<String>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Invariants from a volume-preserving symmetry.
    Hojman {
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// RK4 drift of conserved quantities and Lax eigenvalues.
    Numverify {
        /// Initial point as comma-separated values (default: random from the seed).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        start: Option<Vec<f64>>,
        /// Also measure the convergence order on a step ladder.
        #[arg(long)]
        convergence: bool,
    },
    /// Method-of-lines run for kdv or mkdv.
    Pde {
        /// Soliton parameter (kdv) or sech amplitude (mkdv).
        #[arg(long, default_value_t = 0.5)]
        kappa: f64,
    },
    /// Print a model as a JSON model file.
    ExportModel {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare computed quantities against the stored reference tables.
    Fixtures {
        /// Only fixtures whose id contains this string.
        #[arg(long, default_value = "")]
        filter: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, &cli.opts) {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
