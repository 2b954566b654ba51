//! `radialhyp`: command-line front end for radially symmetric hyperbolic
//! systems.
//!
//! Exit codes: 0 on success, 1 on a domain failure (invalid system, failed
//! check, CFL violation), 2 on usage errors and unreadable inputs.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "radialhyp", version, about = "Radial reduction, simulation and estimate checks for semilinear hyperbolic systems")]
pub struct Cli {
    /// Print machine-readable JSON reports on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Suppress human-readable output.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    /// Cap on worker threads.
    #[arg(long, global = true, env = "RADIALHYP_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SystemArg {
    /// System description (TOML).
    #[arg(long)]
    pub system: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check shapes and finiteness of a system file.
    Validate(SystemArg),
    /// Print the full 3D coefficient matrices A1, A2, A3.
    Assemble(SystemArg),
    /// Sample rotations and report the invariance residual.
    CheckInvariance {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Eigen-decomposition of the radial principal part.
    Spectrum(SystemArg),
    /// Evaluate the algebraic null-condition identities.
    CheckNull {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Exit with status 1 when the condition fails.
        #[arg(long)]
        require_null: bool,
    },
    /// Print the radial system and its characteristic form.
    Reduce(SystemArg),
    /// Run the radial solver.
    Simulate(SimulateArgs),
    /// Run the 3D Cartesian reference solver on radial data.
    Simulate3d(Simulate3dArgs),
    /// Weighted-BV norm series of a `simulate` output directory.
    Norms {
        /// Directory written by `simulate`.
        #[arg(long)]
        dir: PathBuf,
        /// CSV destination; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bilinear space-time estimate for two exact waves.
    Bilinear(BilinearArgs),
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub system: SystemArg,
    /// Initial profiles (TOML).
    #[arg(long)]
    pub profiles: PathBuf,
    #[arg(long = "T", value_name = "T")]
    pub t_end: f64,
    #[arg(long = "N", value_name = "N", default_value_t = 400)]
    pub n: usize,
    #[arg(long = "Rmax", value_name = "RMAX")]
    pub r_max: Option<f64>,
    #[arg(long, default_value_t = 0.9)]
    pub cfl: f64,
    /// Write every k-th step; 0 writes the first and last states only.
    #[arg(long, default_value_t = 0)]
    pub snap_stride: usize,
    /// Norm every k-th step; 0 disables the norm series.
    #[arg(long, default_value_t = 1)]
    pub norm_stride: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct Simulate3dArgs {
    #[command(flatten)]
    pub system: SystemArg,
    #[arg(long)]
    pub profiles: PathBuf,
    #[arg(long = "T", value_name = "T")]
    pub t_end: f64,
    /// Half-width of the cube.
    #[arg(long = "X", value_name = "X", default_value_t = 6.0)]
    pub half_width: f64,
    /// Nodes per axis (odd).
    #[arg(long, default_value_t = 33)]
    pub n: usize,
    #[arg(long, default_value_t = 0.9)]
    pub cfl: f64,
    /// Number of sampling radii on `[0, 3X/4]`.
    #[arg(long, default_value_t = 25)]
    pub radii: usize,
    /// Also write the final field as `field.csv`.
    #[arg(long)]
    pub dump: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseArg {
    Distinct,
    Opposite,
    Zero,
}

#[derive(Args, Debug)]
pub struct BilinearArgs {
    #[arg(long, value_enum)]
    pub case: CaseArg,
    #[arg(long = "dataA", value_name = "FILE")]
    pub data_a: PathBuf,
    #[arg(long = "dataB", value_name = "FILE")]
    pub data_b: PathBuf,
    /// `λ_a,λ_b`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub lambdas: Vec<f64>,
    #[arg(long = "Tgrid", value_delimiter = ',', default_value = "1,2,5,10,20,50,100")]
    pub t_grid: Vec<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub rtol: f64,
    /// CSV destination; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads.filter(|&n| n > 0) {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match commands::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
