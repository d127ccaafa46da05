//! Wall-clock timing of free-support barycenter steps.
//!
//! Each configuration runs once as warm-up and is then timed five times on a
//! monotonic clock; the median is reported. Absolute times depend on the
//! machine, so the table also carries the ratios and slopes that do not:
//! parallel versus semicircular speedups and log–log slopes in N.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::barycenters::{barycenter_free_sphere_with, SgdConfig, StepSchedule};
use crate::error::{Error, Result};
use crate::manifold::sample_uniform_sphere;
use crate::slicing::{SliceKind, SphereMeasure};

/// Timed runs per configuration after the warm-up.
pub const REPEATS: usize = 5;

/// Barycenter flavor being timed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchKind {
    /// Parallel slicing.
    Psw,
    /// Semicircular slicing (S² only).
    Ssw,
}

impl BenchKind {
    fn slice_kind(self) -> SliceKind {
        match self {
            BenchKind::Psw => SliceKind::Parallel,
            BenchKind::Ssw => SliceKind::Semicircular,
        }
    }
}

impl fmt::Display for BenchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchKind::Psw => "psw",
            BenchKind::Ssw => "ssw",
        })
    }
}

impl FromStr for BenchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psw" | "psb" => Ok(BenchKind::Psw),
            "ssw" | "ssb" => Ok(BenchKind::Ssw),
            _ => Err(Error::invalid(format!("unknown benchmark kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub kinds: Vec<BenchKind>,
    /// Points per input measure and in the barycenter.
    pub sizes: Vec<usize>,
    /// Ambient dimensions; semicircular runs use only 3.
    pub dims: Vec<usize>,
    pub slices: usize,
    /// SGD iterations per timed run.
    pub iters: usize,
    pub seed: u64,
}

impl BenchConfig {
    fn validate(&self) -> Result<()> {
        if self.kinds.is_empty() || self.sizes.is_empty() || self.dims.is_empty() {
            return Err(Error::invalid("benchmark needs at least one kind, size and dimension"));
        }
        if self.sizes.iter().any(|n| *n == 0) || self.slices == 0 || self.iters == 0 {
            return Err(Error::invalid("sizes, slices and iterations must be positive"));
        }
        if let Some(d) = self.dims.iter().find(|d| **d < 2) {
            return Err(Error::invalid(format!("dimension {d} is below 2")));
        }
        Ok(())
    }
}

/// Median wall time of one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub kind: BenchKind,
    pub n: usize,
    pub dim: usize,
    pub slices: usize,
    pub iters: usize,
    pub median_seconds: f64,
    pub samples: Vec<f64>,
}

/// Semicircular over parallel median time at one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Speedup {
    pub n: usize,
    pub ratio: f64,
}

/// Least-squares slope of log time against log N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slope {
    pub kind: BenchKind,
    pub dim: usize,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingTable {
    pub config: BenchConfig,
    pub rows: Vec<TimingRow>,
    pub speedups: Vec<Speedup>,
    pub slopes: Vec<Slope>,
}

impl TimingTable {
    pub fn median(&self, kind: BenchKind, n: usize, dim: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.kind == kind && r.n == n && r.dim == dim).map(|r| r.median_seconds)
    }

    /// One line per configuration: kind, n, dim, slices, iters, median, then
    /// the individual samples.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,n,dim,slices,iters,median_seconds");
        for k in 0..REPEATS {
            out.push_str(&format!(",sample_{k}"));
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{},{},{:e}", r.kind, r.n, r.dim, r.slices, r.iters, r.median_seconds));
            for s in &r.samples {
                out.push_str(&format!(",{s:e}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Runs `f` once untimed, then `repeats` timed runs; returns the median and
/// the samples in run order.
pub fn time_median<T>(repeats: usize, mut f: impl FnMut() -> T) -> (f64, Vec<f64>) {
    std::hint::black_box(f());
    let samples: Vec<f64> = (0..repeats.max(1))
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(f());
            start.elapsed().as_secs_f64()
        })
        .collect();
    let mut sorted = samples.clone();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let median = if m % 2 == 1 { sorted[m / 2] } else { 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]) };
    (median, samples)
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::invalid("a slope needs at least two matching points"));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return Err(Error::invalid("log–log slope needs positive values"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("a slope needs two distinct x values"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Median wall time of `iters` barycenter steps with two uniform inputs of
/// n points each and an n-point barycenter on S^{dim−1}.
pub fn time_barycenter(kind: BenchKind, n: usize, dim: usize, slices: usize, iters: usize, seed: u64) -> Result<TimingRow> {
    if kind == BenchKind::Ssw && dim != 3 {
        return Err(Error::invalid("semicircular slicing needs dimension 3"));
    }
    let cloud = |s: u64| -> Result<SphereMeasure> { SphereMeasure::uniform(sample_uniform_sphere(dim, n, s)?) };
    let inputs = [cloud(seed)?, cloud(seed.wrapping_add(1))?];
    let init = cloud(seed.wrapping_add(2))?;
    let cfg = SgdConfig::new(iters, slices, StepSchedule::Constant { tau: 1.0 }, seed)?;
    let mut failure = None;
    let (median_seconds, samples) = time_median(REPEATS, || {
        if let Err(e) = barycenter_free_sphere_with(&inputs, &[0.5, 0.5], &init, &cfg, kind.slice_kind()) {
            failure = Some(e);
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(TimingRow { kind, n, dim, slices, iters, median_seconds, samples })
}

/// Times every (kind, size, dimension) combination and derives the speedups
/// at d = 3 and the log–log slopes in N per kind and dimension.
pub fn bench_speed(cfg: &BenchConfig) -> Result<TimingTable> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &kind in &cfg.kinds {
        for &dim in &cfg.dims {
            if kind == BenchKind::Ssw && dim != 3 {
                continue;
            }
            for &n in &cfg.sizes {
                rows.push(time_barycenter(kind, n, dim, cfg.slices, cfg.iters, cfg.seed)?);
            }
        }
    }
    let mut table = TimingTable { config: cfg.clone(), rows, speedups: Vec::new(), slopes: Vec::new() };
    for &n in &cfg.sizes {
        if let (Some(p), Some(s)) = (table.median(BenchKind::Psw, n, 3), table.median(BenchKind::Ssw, n, 3)) {
            table.speedups.push(Speedup { n, ratio: s / p });
        }
    }
    if cfg.sizes.len() >= 2 {
        for &kind in &cfg.kinds {
            for &dim in &cfg.dims {
                let pts: Vec<(f64, f64)> = cfg
                    .sizes
                    .iter()
                    .filter_map(|&n| table.median(kind, n, dim).map(|t| (n as f64, t)))
                    .collect();
                if pts.len() >= 2 {
                    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
                    if let Ok(slope) = loglog_slope(&xs, &ys) {
                        table.slopes.push(Slope { kind, dim, slope });
                    }
                }
            }
        }
    }
    Ok(table)
}
