//! `plots`: checks figure jobs against the file schemas.
//!
//! Drawing is done by a separate renderer that reads the same job files;
//! this build validates jobs so that schema mismatches surface before any
//! rendering. Exit codes: 0 for a valid job, 2 for an invalid job or a
//! render request.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use slicedot::io::read_json;
use slicedot::plot_job::{PlotInput, PlotJob};

#[derive(Debug, Parser)]
#[command(name = "plots", version, about = "Figure jobs for slicedot outputs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validates a job and its inputs.
    Check {
        #[arg(long)]
        job: PathBuf,
    },
    /// Validates a job, then hands it to the renderer (not part of this build).
    Render {
        #[arg(long)]
        job: PathBuf,
    },
}

fn describe(input: &PlotInput) -> String {
    match input {
        PlotInput::Measure(m) => format!("{:?} measure, {} points", m.manifold, m.points.len()).to_lowercase(),
        PlotInput::Density(d) => format!("grid density, {} x {}", d.thetas.len(), d.phis.len()),
        PlotInput::Report(r) => format!("run report {:?}, {} losses", r.config.name, r.loss.len()),
        PlotInput::Timing(t) => format!("timing table, {} rows", t.rows.len()),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let (path, render) = match cli.command {
        Command::Check { job } => (job, false),
        Command::Render { job } => (job, true),
    };
    let job: PlotJob = read_json(&path)?;
    let inputs = job.load()?;
    for (p, input) in job.inputs.iter().zip(&inputs) {
        println!("{}: {}", p.display(), describe(input));
    }
    if render {
        anyhow::bail!("job is valid ({} -> {}), but no renderer is installed in this build", job.style, job.output.display());
    }
    println!("ok: {} job for {}", job.style, job.output.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
