//! `slicedot`: sliced distances, barycenters, datasets and timing from the
//! command line.
//!
//! Exit codes: 0 on success, 2 for configuration errors (bad flags, files or
//! parameters), 3 when a computation fails numerically.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "slicedot", version, about = "Sliced optimal transport on spheres and SO(3)")]
pub struct Cli {
    /// Worker threads for the parallel estimators (default: all cores).
    #[arg(long, global = true, env = "SLICEDOT_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo sliced Wasserstein distance between two measure files.
    Distance(DistanceArgs),
    /// Barycenters of measure files or of an experiment spec.
    #[command(subcommand)]
    Bary(BaryCommand),
    /// Timing benchmarks.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Writes samples of a named shape or a von Mises–Fisher distribution.
    Sample(SampleArgs),
    /// Kernel density estimate of a measure file on a ring grid.
    Kde(KdeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistanceKind {
    Psw,
    Ssw,
    Sosw,
    /// SO(3) distance computed through unit quaternions on S³.
    SoswS3,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    #[arg(long, value_enum)]
    pub kind: DistanceKind,
    #[arg(long)]
    pub mu: PathBuf,
    #[arg(long)]
    pub nu: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub slices: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Transport exponent p ≥ 1.
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Output path (stdout when absent).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum BaryCommand {
    /// Free-support barycenter by Riemannian stochastic gradient descent.
    Free(BaryArgs),
    /// Fixed-support barycenter by projected gradient descent on weights.
    Fixed(BaryArgs),
    /// Radon barycenter of kernel density estimates.
    Radon(BaryArgs),
    /// Runs an experiment spec, or reruns the config echoed in a run report.
    Run(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SlicingArg {
    Psw,
    Ssw,
    Sosw,
}

#[derive(Debug, Args)]
pub struct BaryArgs {
    /// Input measure files.
    #[arg(long, num_args = 1.., required = true)]
    pub inputs: Vec<PathBuf>,
    /// Barycentric weights, one per input (uniform when absent).
    #[arg(long, num_args = 1..)]
    pub lambda: Option<Vec<f64>>,
    /// Slicing family (psw for sphere inputs and sosw for SO(3) by default).
    #[arg(long, value_enum)]
    pub slicing: Option<SlicingArg>,
    /// Barycenter support size (default: size of the first input).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub iters: usize,
    #[arg(long, default_value_t = 500)]
    pub slices: usize,
    /// Constant step size.
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report losses on an independent slice batch.
    #[arg(long)]
    pub eval_separate: bool,
    /// Truncation degree (radon).
    #[arg(long, default_value_t = 32)]
    pub degree: usize,
    /// Kernel concentration for the input densities (radon).
    #[arg(long)]
    pub kde_kappa: Option<f64>,
    /// Experiment name recorded in the report.
    #[arg(long, default_value = "cli")]
    pub name: String,
    /// Report path (stdout when absent).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the loss trace as CSV.
    #[arg(long)]
    pub loss_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// ExperimentSpec or RunReport JSON.
    #[arg(long)]
    pub spec: PathBuf,
    /// Report path (overrides the spec's output; stdout when neither is set).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Median-of-5 wall times of barycenter steps.
    Speed(SpeedArgs),
}

#[derive(Debug, Args)]
pub struct SpeedArgs {
    /// Comma-separated kinds: psw, ssw.
    #[arg(long, default_value = "psw,ssw")]
    pub kind: String,
    /// Sizes as a list (`100,1000`) or a log-spaced range (`40..5000`).
    #[arg(long, default_value = "40..5000")]
    pub n: String,
    /// Points of a range given to --n.
    #[arg(long, default_value_t = 6)]
    pub points: usize,
    /// Comma-separated ambient dimensions.
    #[arg(long, default_value = "3")]
    pub dims: String,
    #[arg(long, default_value_t = 200)]
    pub slices: usize,
    #[arg(long, default_value_t = 20)]
    pub iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV path (stdout when absent).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the full table with speedups and slopes as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// croissant, smiley, equator, antipodal-diracs or vmf.
    #[arg(long)]
    pub shape: String,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// vMF center as x,y,z.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub center: Option<Vec<f64>>,
    /// vMF concentration.
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KdeArgs {
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long, default_value_t = 50.0)]
    pub kappa: f64,
    /// Grid for this degree: D + 1 rings of 2D + 2 points.
    #[arg(long, default_value_t = 64)]
    pub degree: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
