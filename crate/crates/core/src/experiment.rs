//! Experiment descriptions and self-describing run reports.
//!
//! An [`ExperimentSpec`] names its input datasets, a solver (slicing ×
//! method) and a budget. [`run_experiment`] echoes it into a [`RunReport`]
//! together with the loss trace, phase timings, the result and an
//! environment fingerprint; rerunning the echoed spec reproduces the loss
//! trace bit for bit.

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::barycenters::{
    barycenter_fixed, barycenter_free_so3, barycenter_free_sphere_with, barycenter_radon, FixedSupportProblem,
    RadonBarycenterConfig, SgdConfig, StepSchedule,
};
use crate::datasets::{kde_vmf, shape_measure_rotated, so3_cluster, vmf_sample, Shape, VmfParams};
use crate::error::{Error, Result};
use crate::io::{read_measure, AnyMeasure, GridDensityFile, ManifoldKind, MeasureFile};
use crate::manifold::{sample_one_so3, sample_one_sphere, Rotation, UnitVector};
use crate::rng;
use crate::slicing::{DiscreteMeasure, ManifoldPoint, SliceKind, So3Measure, SphereMeasure};

/// Substream for the initial iterate or support of a run.
const INIT_STREAM: u64 = 3;
/// Kernel concentration used to turn point inputs into grid densities.
pub const DEFAULT_KDE_KAPPA: f64 = 50.0;

/// Where an input measure comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DatasetSpec {
    Vmf { center: [f64; 3], kappa: f64, n: usize, seed: u64 },
    Shape {
        shape: Shape,
        n: usize,
        seed: u64,
        /// Row-major rotation applied to every sample.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rotation: Option<[f64; 9]>,
    },
    UniformSphere { dim: usize, n: usize, seed: u64 },
    So3Cluster { center: [f64; 9], spread: f64, n: usize, seed: u64 },
    UniformSo3 { n: usize, seed: u64 },
    File { path: PathBuf },
}

impl DatasetSpec {
    /// The manifold, when known without reading a file.
    pub fn manifold(&self) -> Option<ManifoldKind> {
        match self {
            DatasetSpec::Vmf { .. } | DatasetSpec::Shape { .. } | DatasetSpec::UniformSphere { .. } => {
                Some(ManifoldKind::Sphere)
            }
            DatasetSpec::So3Cluster { .. } | DatasetSpec::UniformSo3 { .. } => Some(ManifoldKind::So3),
            DatasetSpec::File { .. } => None,
        }
    }

    pub fn load(&self) -> Result<AnyMeasure> {
        Ok(match self {
            DatasetSpec::Vmf { center, kappa, n, seed } => {
                let params = VmfParams::new(UnitVector::normalize(center.to_vec())?, *kappa)?;
                AnyMeasure::Sphere(vmf_sample(&params, *n, *seed)?)
            }
            DatasetSpec::Shape { shape, n, seed, rotation } => {
                let q = rotation.map(Rotation::from_row_major).transpose()?.unwrap_or_else(Rotation::identity);
                AnyMeasure::Sphere(shape_measure_rotated(*shape, *n, *seed, &q)?)
            }
            DatasetSpec::UniformSphere { dim, n, seed } => {
                AnyMeasure::Sphere(SphereMeasure::uniform(crate::manifold::sample_uniform_sphere(*dim, *n, *seed)?)?)
            }
            DatasetSpec::So3Cluster { center, spread, n, seed } => {
                AnyMeasure::So3(so3_cluster(&Rotation::from_row_major(*center)?, *spread, *n, *seed)?)
            }
            DatasetSpec::UniformSo3 { n, seed } => {
                AnyMeasure::So3(So3Measure::uniform(crate::manifold::sample_uniform_so3(*n, *seed))?)
            }
            DatasetSpec::File { path } => read_measure(path)?,
        })
    }
}

/// Slicing family of a solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slicing {
    /// Parallel slicing of S^{d-1}.
    Psw,
    /// Semicircular slicing of S².
    Ssw,
    /// Slicing of SO(3).
    Sosw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Free,
    Fixed,
    Radon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub slicing: Slicing,
    pub method: Method,
}

impl SolverSpec {
    /// The manifold this solver runs on, or an error for unsupported pairs.
    pub fn manifold(&self) -> Result<ManifoldKind> {
        match (self.slicing, self.method) {
            (Slicing::Psw, _) | (Slicing::Ssw, Method::Free) => Ok(ManifoldKind::Sphere),
            (Slicing::Sosw, Method::Free | Method::Fixed) => Ok(ManifoldKind::So3),
            (s, m) => Err(Error::invalid(format!("solver {s:?} × {m:?} is not available"))),
        }
    }
}

/// Sizes, step sizes and seeds of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    /// Support size of the free or fixed barycenter.
    pub n: usize,
    pub slices: usize,
    pub iterations: usize,
    pub seed: u64,
    pub schedule: StepSchedule,
    #[serde(default)]
    pub eval_separate: bool,
    /// Truncation degree of the Radon pipeline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    /// Kernel concentration for the Radon pipeline's input densities.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kde_kappa: Option<f64>,
}

impl Budget {
    fn sgd(&self) -> Result<SgdConfig> {
        let mut cfg = SgdConfig::new(self.iterations, self.slices, self.schedule.clone(), self.seed)?;
        cfg.eval_separate = self.eval_separate;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub inputs: Vec<DatasetSpec>,
    /// Barycentric weights; uniform when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    pub solver: SolverSpec,
    pub budget: Budget,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    /// Checks everything that can be checked without loading data.
    pub fn validate(&self) -> Result<()> {
        let manifold = self.solver.manifold()?;
        if self.inputs.is_empty() {
            return Err(Error::invalid("an experiment needs at least one input"));
        }
        if let Some(bad) = self.inputs.iter().filter_map(DatasetSpec::manifold).find(|m| *m != manifold) {
            return Err(Error::invalid(format!("{bad:?} input for a {manifold:?} solver")));
        }
        if let Some(l) = &self.lambda {
            if l.len() != self.inputs.len() {
                return Err(Error::DimensionMismatch { expected: self.inputs.len(), got: l.len() });
            }
            crate::error::check_simplex(l, 1e-9)?;
        }
        if self.solver.method == Method::Radon {
            if self.budget.degree.is_none() {
                return Err(Error::invalid("the Radon solver needs a degree"));
            }
            if let Some(k) = self.budget.kde_kappa.filter(|k| !(*k > 0.0 && k.is_finite())) {
                return Err(Error::invalid(format!("kernel concentration {k} must be positive and finite")));
            }
        } else {
            if self.budget.n == 0 {
                return Err(Error::invalid("support size must be positive"));
            }
            self.budget.sgd()?;
        }
        Ok(())
    }

    pub fn lambda(&self) -> Vec<f64> {
        self.lambda.clone().unwrap_or_else(|| vec![1.0 / self.inputs.len() as f64; self.inputs.len()])
    }
}

/// Wall-clock time of one phase of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTiming {
    pub phase: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RunResult {
    Measure {
        measure: MeasureFile,
        /// Steps in which some slice had tied projections.
        tie_steps: usize,
    },
    GridDensity {
        density: GridDensityFile,
        clipped_mass: f64,
        slice_clipped_mass: f64,
    },
}

/// Where and how a run was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub os: String,
    pub arch: String,
    pub threads: usize,
    pub optimized: bool,
}

impl Environment {
    pub fn current() -> Self {
        #[cfg(feature = "parallel")]
        let threads = rayon::current_num_threads();
        #[cfg(not(feature = "parallel"))]
        let threads = 1;
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            threads,
            optimized: !cfg!(debug_assertions),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ExperimentSpec,
    pub loss: Vec<f64>,
    pub timings: Vec<PhaseTiming>,
    pub result: RunResult,
    pub environment: Environment,
}

fn sphere_inputs(inputs: Vec<AnyMeasure>) -> Result<Vec<SphereMeasure>> {
    inputs
        .into_iter()
        .map(|m| match m {
            AnyMeasure::Sphere(m) => Ok(m),
            AnyMeasure::So3(_) => Err(Error::invalid("SO(3) input for a sphere solver")),
        })
        .collect()
}

fn so3_inputs(inputs: Vec<AnyMeasure>) -> Result<Vec<So3Measure>> {
    inputs
        .into_iter()
        .map(|m| match m {
            AnyMeasure::So3(m) => Ok(m),
            AnyMeasure::Sphere(_) => Err(Error::invalid("sphere input for an SO(3) solver")),
        })
        .collect()
}

/// n uniform points, the starting cloud of free runs and the support of
/// fixed runs.
fn initial_sphere(dim: usize, n: usize, seed: u64) -> Result<SphereMeasure> {
    let mut rng = rng::stream(seed, INIT_STREAM);
    SphereMeasure::uniform((0..n).map(|_| sample_one_sphere(dim, &mut rng)).collect())
}

fn initial_so3(n: usize, seed: u64) -> Result<So3Measure> {
    let mut rng = rng::stream(seed, INIT_STREAM);
    So3Measure::uniform((0..n).map(|_| sample_one_so3(&mut rng)).collect())
}

/// Mass of `m` moved to the nearest support point (ties to the lower index).
fn bin_to_support<P: ManifoldPoint>(support: &[P], m: &DiscreteMeasure<P>) -> Vec<f64> {
    let coords: Vec<Vec<f64>> = support.iter().map(ManifoldPoint::ambient_coords).collect();
    let mut w = vec![0.0; support.len()];
    for (x, mass) in m.points().iter().zip(m.weights()) {
        let x = x.ambient_coords();
        let dist = |c: &Vec<f64>| c.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        let best = (0..coords.len()).min_by(|&a, &b| dist(&coords[a]).total_cmp(&dist(&coords[b]))).expect("support");
        w[best] += mass;
    }
    w
}

fn run_fixed<P: ManifoldPoint>(
    support: DiscreteMeasure<P>,
    inputs: &[DiscreteMeasure<P>],
    lambda: Vec<f64>,
    cfg: &SgdConfig,
) -> Result<(Vec<f64>, DiscreteMeasure<P>)> {
    let histograms = inputs.iter().map(|m| bin_to_support(support.points(), m)).collect();
    let (points, init) = support.into_parts();
    let problem = FixedSupportProblem::new(points.clone(), histograms, lambda, 2.0)?;
    let out = barycenter_fixed(&problem, &init, cfg)?;
    Ok((out.loss, DiscreteMeasure::new(points, out.weights)?))
}

/// Loads the inputs, runs the solver and assembles the report.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<RunReport> {
    spec.validate()?;
    let manifold = spec.solver.manifold()?;
    let lambda = spec.lambda();
    let budget = &spec.budget;

    let clock = Instant::now();
    let inputs = spec.inputs.iter().map(DatasetSpec::load).collect::<Result<Vec<_>>>()?;
    if let Some(bad) = inputs.iter().find(|m| m.kind() != manifold) {
        return Err(Error::invalid(format!("{:?} input for a {manifold:?} solver", bad.kind())));
    }
    let mut timings = vec![PhaseTiming { phase: "load".into(), seconds: clock.elapsed().as_secs_f64() }];

    let clock = Instant::now();
    let (loss, result) = match (spec.solver.slicing, spec.solver.method) {
        (slicing @ (Slicing::Psw | Slicing::Ssw), Method::Free) => {
            let inputs = sphere_inputs(inputs)?;
            let kind = if slicing == Slicing::Psw { SliceKind::Parallel } else { SliceKind::Semicircular };
            let init = initial_sphere(inputs[0].dim(), budget.n, budget.seed)?;
            let out = barycenter_free_sphere_with(&inputs, &lambda, &init, &budget.sgd()?, kind)?;
            (out.loss, RunResult::Measure { measure: (&out.measure).into(), tie_steps: out.tie_steps })
        }
        (Slicing::Sosw, Method::Free) => {
            let inputs = so3_inputs(inputs)?;
            let init = initial_so3(budget.n, budget.seed)?;
            let out = barycenter_free_so3(&inputs, &lambda, &init, &budget.sgd()?)?;
            (out.loss, RunResult::Measure { measure: (&out.measure).into(), tie_steps: out.tie_steps })
        }
        (Slicing::Psw, Method::Fixed) => {
            let inputs = sphere_inputs(inputs)?;
            let support = initial_sphere(inputs[0].dim(), budget.n, budget.seed)?;
            let (loss, m) = run_fixed(support, &inputs, lambda, &budget.sgd()?)?;
            (loss, RunResult::Measure { measure: (&m).into(), tie_steps: 0 })
        }
        (Slicing::Sosw, Method::Fixed) => {
            let inputs = so3_inputs(inputs)?;
            let support = initial_so3(budget.n, budget.seed)?;
            let (loss, m) = run_fixed(support, &inputs, lambda, &budget.sgd()?)?;
            (loss, RunResult::Measure { measure: (&m).into(), tie_steps: 0 })
        }
        (Slicing::Psw, Method::Radon) => {
            let inputs = sphere_inputs(inputs)?;
            let degree = budget.degree.expect("validated");
            let kappa = budget.kde_kappa.unwrap_or(DEFAULT_KDE_KAPPA);
            let cfg = RadonBarycenterConfig::new(degree);
            let densities = inputs.iter().map(|m| kde_vmf(m, kappa, &cfg.grid)).collect::<Result<Vec<_>>>()?;
            let out = barycenter_radon(&densities, &lambda, &cfg)?;
            let result = RunResult::GridDensity {
                density: GridDensityFile::new(&cfg.grid, &out.density)?,
                clipped_mass: out.clipped_mass,
                slice_clipped_mass: out.slice_clipped_mass,
            };
            (Vec::new(), result)
        }
        (s, m) => return Err(Error::invalid(format!("solver {s:?} × {m:?} is not available"))),
    };
    timings.push(PhaseTiming { phase: "solve".into(), seconds: clock.elapsed().as_secs_f64() });
    if loss.iter().any(|v| !v.is_finite()) {
        return Err(Error::numeric("the loss trace contains non-finite values"));
    }
    Ok(RunReport { config: spec.clone(), loss, timings, result, environment: Environment::current() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(slicing: Slicing, method: Method, inputs: Vec<DatasetSpec>) -> ExperimentSpec {
        ExperimentSpec {
            name: "test".into(),
            inputs,
            lambda: None,
            solver: SolverSpec { slicing, method },
            budget: Budget {
                n: 20,
                slices: 30,
                iterations: 15,
                seed: 5,
                schedule: StepSchedule::Constant { tau: 1.0 },
                eval_separate: false,
                degree: Some(6),
                kde_kappa: Some(10.0),
            },
            output: None,
        }
    }

    fn vmfs() -> Vec<DatasetSpec> {
        vec![
            DatasetSpec::Vmf { center: [0.0, 0.0, 1.0], kappa: 30.0, n: 25, seed: 1 },
            DatasetSpec::Vmf { center: [1.0, 0.0, 0.0], kappa: 30.0, n: 30, seed: 2 },
        ]
    }

    fn clusters() -> Vec<DatasetSpec> {
        let id = Rotation::identity().to_row_major();
        vec![
            DatasetSpec::So3Cluster { center: id, spread: 0.1, n: 15, seed: 1 },
            DatasetSpec::UniformSo3 { n: 10, seed: 2 },
        ]
    }

    #[test]
    fn every_available_solver_runs_and_reproduces() {
        let runs = [
            spec(Slicing::Psw, Method::Free, vmfs()),
            spec(Slicing::Ssw, Method::Free, vmfs()),
            spec(Slicing::Psw, Method::Fixed, vmfs()),
            spec(Slicing::Sosw, Method::Free, clusters()),
            spec(Slicing::Sosw, Method::Fixed, clusters()),
            spec(Slicing::Psw, Method::Radon, vmfs()),
        ];
        for s in runs {
            let report = run_experiment(&s).unwrap();
            let text = serde_json::to_string(&report).unwrap();
            let back: RunReport = serde_json::from_str(&text).unwrap();
            assert_eq!(back, report);
            let again = run_experiment(&back.config).unwrap();
            assert_eq!(again.loss, report.loss);
            assert_eq!(again.result, report.result);
            if s.solver.method == Method::Radon {
                assert!(report.loss.is_empty());
                let RunResult::GridDensity { density, .. } = &report.result else { panic!("grid density expected") };
                assert!(density.grid().is_ok());
            } else {
                assert_eq!(report.loss.len(), 15);
            }
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(spec(Slicing::Ssw, Method::Fixed, vmfs()).validate().is_err());
        assert!(spec(Slicing::Sosw, Method::Radon, clusters()).validate().is_err());
        assert!(spec(Slicing::Psw, Method::Free, clusters()).validate().is_err());
        assert!(spec(Slicing::Psw, Method::Free, vec![]).validate().is_err());
        let mut s = spec(Slicing::Psw, Method::Free, vmfs());
        s.lambda = Some(vec![1.0]);
        assert!(s.validate().is_err());
        let mut s = spec(Slicing::Psw, Method::Radon, vmfs());
        s.budget.degree = None;
        assert!(s.validate().is_err());
        let mut s = spec(Slicing::Psw, Method::Free, vmfs());
        s.budget.slices = 0;
        assert!(s.validate().is_err());
        let s = spec(Slicing::Psw, Method::Free, vec![DatasetSpec::File { path: "/nonexistent.json".into() }]);
        assert!(run_experiment(&s).is_err());
    }

    #[test]
    fn binning_keeps_mass() {
        let support = initial_sphere(3, 12, 1).unwrap();
        let m = vmf_sample(&VmfParams::new(UnitVector::basis(3, 0), 5.0).unwrap(), 100, 2).unwrap();
        let w = bin_to_support(support.points(), &m);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let at_support = bin_to_support(support.points(), &support);
        assert_eq!(at_support, support.weights());
    }

    #[test]
    fn spec_json_shape() {
        let s = spec(Slicing::Psw, Method::Free, vmfs());
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["solver"]["slicing"], "psw");
        assert_eq!(v["inputs"][0]["kind"], "vmf");
        assert_eq!(v["budget"]["schedule"]["kind"], "constant");
        let unknown = r#"{"name":"x","inputs":[],"solver":{"slicing":"psw","method":"free"},"budget":{},"bogus":1}"#;
        assert!(serde_json::from_str::<ExperimentSpec>(unknown).is_err());
    }
}
