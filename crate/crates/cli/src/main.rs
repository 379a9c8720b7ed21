mod range;
mod studies;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Convergence and cost studies: golden ratio, trapezoid rule, forward
/// Euler, secant/Newton and an immersed-boundary swimmer.
#[derive(Debug, Parser)]
#[command(name = "convlab", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct OutArgs {
    /// Output directory. Defaults to `$CONVLAB_OUT/<subcommand>`, or
    /// `results/<subcommand>` when the variable is unset.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fibonacci ratio approximations of the golden ratio.
    Golden {
        #[arg(long, default_value_t = 40)]
        n_max: usize,
        /// Report how many terms reach this absolute error.
        #[arg(long, default_value_t = 1e-15)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Composite trapezoid rule against a fine-grid reference.
    Trapezoid {
        #[arg(long, value_enum, default_value_t = Example::Nonperiodic)]
        example: Example,
        /// Partition counts, e.g. `2:2:64` or `100,1000,10000`.
        #[arg(long, value_parser = range::parse_counts)]
        n_list: Option<range::Counts>,
        /// Partitions used for the reference value.
        #[arg(long, default_value = "1e7", value_parser = range::parse_count)]
        reference_n: usize,
        /// Where the reference value is cached. Defaults to `<out>/cache`.
        #[arg(long, value_name = "DIR")]
        cache: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Forward Euler on y' = 2 pi cos(2 pi t), y(0) = 1, t in [0, 2].
    Euler {
        /// Step sizes, e.g. `1e-2,1e-3,1e-4`.
        #[arg(long, value_parser = range::parse_values)]
        dt_list: Option<range::Values>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Secant and Newton iterations with empirical order estimates.
    Secant {
        #[arg(long, value_enum, default_value_t = RootProblem::Sqrt2)]
        function: RootProblem,
        #[arg(long)]
        x0: Option<f64>,
        #[arg(long)]
        x1: Option<f64>,
        #[arg(long, default_value_t = 1e-15)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// One swimmer simulation.
    Jelly {
        #[command(flatten)]
        sim: SimArgs,
        /// Grid points per side.
        #[arg(long)]
        n: Option<usize>,
        /// Load the body from `<PREFIX>.vertex` and friends instead of
        /// building the default bell.
        #[arg(long, value_name = "PREFIX")]
        geometry: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Swimmer simulations over several grid sizes, compared against the
    /// finest one.
    JellySweep {
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, default_value = "32,48,64,96,128", value_parser = range::parse_counts)]
        n_list: range::Counts,
        /// Simulations run at once.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Run members one at a time so wall times are comparable.
        #[arg(long)]
        timed: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Fits every study CSV (`resolution,error,...`) found in a directory.
    Report {
        #[arg(long, value_name = "DIR")]
        dir: PathBuf,
        /// Errors at or below this fraction of the largest error are ignored.
        #[arg(long, default_value_t = convlab::harness::DEFAULT_FLOOR)]
        floor: f64,
    },
}

#[derive(Debug, Args, Clone)]
pub struct SimArgs {
    /// `key = value` configuration file.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Target Reynolds number.
    #[arg(long)]
    pub re: Option<f64>,
    /// Number of contraction cycles.
    #[arg(long)]
    pub cycles: Option<f64>,
    /// Skip VTK snapshot files.
    #[arg(long)]
    pub no_vtk: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Example {
    Nonperiodic,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RootProblem {
    /// x^2 - 2
    Sqrt2,
    /// cos(x) - x
    Cos,
    /// e^x - 2
    Exp,
}

/// Why a run stopped.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(convlab::Error),
}

impl From<convlab::Error> for Failure {
    fn from(e: convlab::Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Core(e) if e.is_io() => 3,
            Failure::Core(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match studies::run(cli.command) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
