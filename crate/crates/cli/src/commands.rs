use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::json;
use slicedot::barycenters::StepSchedule;
use slicedot::bench::{bench_speed, BenchConfig, BenchKind};
use slicedot::datasets::{kde_vmf, shape_measure, vmf_sample, VmfParams};
use slicedot::distances::{psw, sosw, sosw_via_s3, ssw, SliceBudget};
use slicedot::experiment::{
    run_experiment, Budget, DatasetSpec, ExperimentSpec, Method, RunReport, Slicing, SolverSpec,
};
use slicedot::harmonics::SphereGrid;
use slicedot::io::{read_json, read_measure, AnyMeasure, GridDensityFile, ManifoldKind, MeasureFile};
use slicedot::manifold::UnitVector;

use crate::{BaryArgs, BaryCommand, BenchCommand, Cli, Command, DistanceArgs, DistanceKind, KdeArgs, RunArgs, SampleArgs, SlicingArg, SpeedArgs};

/// Failures of the computation itself exit with 3, everything else with 2.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    let numeric = e.chain().any(|c| c.downcast_ref::<slicedot::Error>().is_some_and(slicedot::Error::is_numeric));
    if numeric {
        3
    } else {
        2
    }
}

pub fn run(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    match cli.command {
        Command::Distance(a) => distance(a),
        Command::Bary(BaryCommand::Free(a)) => bary(a, Method::Free),
        Command::Bary(BaryCommand::Fixed(a)) => bary(a, Method::Fixed),
        Command::Bary(BaryCommand::Radon(a)) => bary(a, Method::Radon),
        Command::Bary(BaryCommand::Run(a)) => rerun(a),
        Command::Bench(BenchCommand::Speed(a)) => speed(a),
        Command::Sample(a) => sample(a),
        Command::Kde(a) => kde(a),
    }
}

/// Writes `text` to `path`, or to stdout when there is no path.
fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    emit(path, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn distance(a: DistanceArgs) -> Result<()> {
    let budget = SliceBudget::new(a.slices, a.seed, a.p)?;
    let mu = read_measure(&a.mu)?;
    let nu = read_measure(&a.nu)?;
    let est = match (a.kind, mu, nu) {
        (DistanceKind::Psw, AnyMeasure::Sphere(m), AnyMeasure::Sphere(n)) => psw(&m, &n, &budget)?,
        (DistanceKind::Ssw, AnyMeasure::Sphere(m), AnyMeasure::Sphere(n)) => ssw(&m, &n, &budget)?,
        (DistanceKind::Sosw, AnyMeasure::So3(m), AnyMeasure::So3(n)) => sosw(&m, &n, &budget)?,
        (DistanceKind::SoswS3, AnyMeasure::So3(m), AnyMeasure::So3(n)) => sosw_via_s3(&m, &n, &budget)?,
        (kind, m, n) => bail!("{kind:?} does not apply to {:?} and {:?} measures", m.kind(), n.kind()),
    };
    let kind = format!("{:?}", a.kind).to_lowercase();
    emit_json(
        a.output.as_deref(),
        &json!({
            "kind": kind,
            "value": est.value,
            "raw_pth_power": est.raw_pth_power,
            "stderr": est.stderr,
            "slices": est.slices,
            "p": a.p,
            "seed": a.seed,
        }),
    )
}

fn bary(a: BaryArgs, method: Method) -> Result<()> {
    let first = read_measure(&a.inputs[0])?;
    let slicing = match (a.slicing, first.kind()) {
        (Some(SlicingArg::Psw), _) => Slicing::Psw,
        (Some(SlicingArg::Ssw), _) => Slicing::Ssw,
        (Some(SlicingArg::Sosw), _) => Slicing::Sosw,
        (None, ManifoldKind::Sphere) => Slicing::Psw,
        (None, ManifoldKind::So3) => Slicing::Sosw,
    };
    let spec = ExperimentSpec {
        name: a.name,
        inputs: a.inputs.iter().map(|p| DatasetSpec::File { path: p.clone() }).collect(),
        lambda: a.lambda,
        solver: SolverSpec { slicing, method },
        budget: Budget {
            n: a.n.unwrap_or(first.len()),
            slices: a.slices,
            iterations: a.iters,
            seed: a.seed,
            schedule: StepSchedule::Constant { tau: a.tau },
            eval_separate: a.eval_separate,
            degree: (method == Method::Radon).then_some(a.degree),
            kde_kappa: a.kde_kappa,
        },
        output: a.output.clone(),
    };
    let report = run_experiment(&spec)?;
    if let Some(path) = &a.loss_csv {
        let mut csv = String::from("iteration,loss\n");
        for (l, v) in report.loss.iter().enumerate() {
            csv.push_str(&format!("{l},{v:e}\n"));
        }
        emit(Some(path), &csv)?;
    }
    emit_json(a.output.as_deref(), &report)
}

fn rerun(a: RunArgs) -> Result<()> {
    let value: serde_json::Value = read_json(&a.spec)?;
    let spec: ExperimentSpec = if value.get("config").is_some() {
        serde_json::from_value::<RunReport>(value).context("parsing run report")?.config
    } else {
        serde_json::from_value(value).context("parsing experiment spec")?
    };
    let report = run_experiment(&spec)?;
    let output: Option<PathBuf> = a.output.or_else(|| spec.output.clone());
    emit_json(output.as_deref(), &report)
}

/// `40..5000` with `points` log-spaced values, or a comma-separated list.
fn parse_sizes(s: &str, points: usize) -> Result<Vec<usize>> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().context("range start")?;
        let hi: usize = hi.trim().parse().context("range end")?;
        if lo == 0 || hi < lo || points < 2 {
            bail!("size range {s} needs 0 < start ≤ end and at least two points");
        }
        let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
        let mut sizes: Vec<usize> = (0..points)
            .map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp().round() as usize)
            .collect();
        sizes.dedup();
        Ok(sizes)
    } else {
        s.split(',').map(|v| v.trim().parse().with_context(|| format!("size {v:?}"))).collect()
    }
}

fn speed(a: SpeedArgs) -> Result<()> {
    let kinds = a.kind.split(',').map(|k| k.trim().parse::<BenchKind>()).collect::<Result<Vec<_>, _>>()?;
    let dims = a.dims.split(',').map(|d| d.trim().parse::<usize>().with_context(|| format!("dimension {d:?}"))).collect::<Result<Vec<_>>>()?;
    let cfg = BenchConfig { kinds, sizes: parse_sizes(&a.n, a.points)?, dims, slices: a.slices, iters: a.iters, seed: a.seed };
    let table = bench_speed(&cfg)?;
    if let Some(path) = &a.json {
        emit_json(Some(path), &table)?;
    }
    emit(a.output.as_deref(), &table.to_csv())
}

fn sample(a: SampleArgs) -> Result<()> {
    let m = if a.shape == "vmf" {
        let center = a.center.filter(|c| c.len() == 3).ok_or_else(|| anyhow!("vmf needs --center x,y,z"))?;
        let kappa = a.kappa.ok_or_else(|| anyhow!("vmf needs --kappa"))?;
        vmf_sample(&VmfParams::new(UnitVector::normalize(center)?, kappa)?, a.n, a.seed)?
    } else {
        shape_measure(a.shape.parse()?, a.n, a.seed)?
    };
    emit_json(a.output.as_deref(), &MeasureFile::from(&m))
}

fn kde(a: KdeArgs) -> Result<()> {
    let AnyMeasure::Sphere(m) = read_measure(&a.measure)? else {
        bail!("kernel density estimates need a sphere measure");
    };
    let grid = SphereGrid::for_degree(a.degree);
    let values = kde_vmf(&m, a.kappa, &grid)?;
    emit_json(a.output.as_deref(), &GridDensityFile::new(&grid, &values)?)
}
