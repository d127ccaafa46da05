//! Monte Carlo sliced Wasserstein distances.
//!
//! Every estimator draws P slicing directions from a seeded stream, computes
//! one-dimensional W_p^p per slice in parallel, and averages them in index
//! order, so results are bit-identical across thread counts. Estimates carry
//! the standard error of the per-slice mean.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::{dot, sample_one_so3, sample_one_sphere, Quaternion, Rotation, UnitVector};
use crate::ot1d::{circle_cost_pow, pow, sorted_matching_pow, wasserstein_1d_pow, CircleMeasure, CircleSolver, Measure1D};
use crate::par::{map_indexed, mean_stderr};
use crate::rng;
use crate::slicing::{slice_so3_angle, So3Measure, SemicircleFrame, SphereMeasure};

/// Substream used for slicing directions.
const DIRECTIONS: u64 = 1;

/// Monte Carlo budget: P slices, a seed and the transport exponent p ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceBudget {
    pub slices: usize,
    pub seed: u64,
    pub p: f64,
}

impl SliceBudget {
    pub fn new(slices: usize, seed: u64, p: f64) -> Result<Self> {
        let b = Self { slices, seed, p };
        b.validate()?;
        Ok(b)
    }

    fn validate(&self) -> Result<()> {
        if self.slices == 0 {
            return Err(Error::invalid("slice count must be positive"));
        }
        if !(self.p >= 1.0) || !self.p.is_finite() {
            return Err(Error::invalid(format!("transport exponent {} must be at least 1", self.p)));
        }
        Ok(())
    }
}

/// A sliced distance with its Monte Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    /// raw_pth_power^{1/p}.
    pub value: f64,
    /// Mean of the per-slice W_p^p.
    pub raw_pth_power: f64,
    /// Standard error of that mean.
    pub stderr: f64,
    pub slices: usize,
}

impl DistanceEstimate {
    fn from_samples(samples: &[f64], p: f64) -> Self {
        let (mean, stderr) = mean_stderr(samples);
        let raw = mean.max(0.0);
        Self { value: raw.powf(1.0 / p), raw_pth_power: raw, stderr, slices: samples.len() }
    }
}

/// P uniform directions on S^{dim−1} for `seed`; the first P of a larger
/// request are the same directions.
pub fn sphere_directions(dim: usize, slices: usize, seed: u64) -> Vec<UnitVector> {
    let mut r = rng::stream(seed, DIRECTIONS);
    (0..slices).map(|_| sample_one_sphere(dim, &mut r)).collect()
}

/// P Haar-distributed slicing rotations for `seed`.
pub fn so3_directions(slices: usize, seed: u64) -> Vec<Rotation> {
    let mut r = rng::stream(seed, DIRECTIONS);
    (0..slices).map(|_| sample_one_so3(&mut r)).collect()
}

fn check_same_dim(mu: &SphereMeasure, nu: &SphereMeasure) -> Result<()> {
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch { expected: mu.dim(), got: nu.dim() });
    }
    Ok(())
}

/// W_p^p between two weighted samples on [lo, hi]; sorted matching when both
/// are uniform of equal size.
fn interval_cost(xs: Vec<f64>, xw: &[f64], ys: Vec<f64>, yw: &[f64], uniform: bool, range: (f64, f64), p: f64) -> f64 {
    if uniform {
        let (mut xs, mut ys) = (xs, ys);
        xs.sort_unstable_by(f64::total_cmp);
        ys.sort_unstable_by(f64::total_cmp);
        return sorted_matching_pow(&xs, &ys, p);
    }
    let a = Measure1D::discrete_on(range.0, range.1, &xs, xw).expect("validated weights");
    let b = Measure1D::discrete_on(range.0, range.1, &ys, yw).expect("validated weights");
    wasserstein_1d_pow(&a, &b, p).expect("validated exponent")
}

fn same_uniform<P: crate::slicing::ManifoldPoint>(
    mu: &crate::slicing::DiscreteMeasure<P>,
    nu: &crate::slicing::DiscreteMeasure<P>,
) -> bool {
    mu.len() == nu.len() && mu.is_uniform() && nu.is_uniform()
}

/// Parallel-sliced spherical Wasserstein distance PSW_p on S^{d−1}.
pub fn psw(mu: &SphereMeasure, nu: &SphereMeasure, budget: &SliceBudget) -> Result<DistanceEstimate> {
    budget.validate()?;
    check_same_dim(mu, nu)?;
    let dirs = sphere_directions(mu.dim(), budget.slices, budget.seed);
    psw_with_directions(mu, nu, &dirs, budget.p)
}

/// PSW_p with caller-supplied directions (common random numbers).
pub fn psw_with_directions(
    mu: &SphereMeasure,
    nu: &SphereMeasure,
    directions: &[UnitVector],
    p: f64,
) -> Result<DistanceEstimate> {
    SliceBudget::new(directions.len(), 0, p)?;
    check_same_dim(mu, nu)?;
    if let Some(d) = directions.iter().find(|d| d.dim() != mu.dim()) {
        return Err(Error::DimensionMismatch { expected: mu.dim(), got: d.dim() });
    }
    let dim = mu.dim();
    let (fx, fy) = (mu.flat_coords(), nu.flat_coords());
    let uniform = same_uniform(mu, nu);
    let samples = map_indexed(directions.len(), |q| {
        let psi = directions[q].coords();
        let proj = |flat: &[f64]| -> Vec<f64> { flat.chunks_exact(dim).map(|x| dot(x, psi).clamp(-1.0, 1.0)).collect() };
        interval_cost(proj(&fx), mu.weights(), proj(&fy), nu.weights(), uniform, (-1.0, 1.0), p)
    });
    Ok(DistanceEstimate::from_samples(&samples, p))
}

/// Semicircular sliced Wasserstein distance SSW_p on S².
pub fn ssw(mu: &SphereMeasure, nu: &SphereMeasure, budget: &SliceBudget) -> Result<DistanceEstimate> {
    budget.validate()?;
    check_same_dim(mu, nu)?;
    if mu.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: mu.dim() });
    }
    let dirs = sphere_directions(3, budget.slices, budget.seed);
    let (fx, fy) = (mu.flat_coords(), nu.flat_coords());
    let p = budget.p;
    let samples = map_indexed(dirs.len(), |q| {
        let frame = SemicircleFrame::new(&dirs[q]).expect("three-dimensional direction");
        let angles = |flat: &[f64]| -> Vec<f64> { flat.chunks_exact(3).map(|x| frame.angle(x).angle).collect() };
        let a = CircleMeasure::new(&angles(&fx), mu.weights()).expect("validated weights");
        let b = CircleMeasure::new(&angles(&fy), nu.weights()).expect("validated weights");
        circle_cost_pow(&a, &b, p, &mut CircleSolver::default())
    });
    Ok(DistanceEstimate::from_samples(&samples, p))
}

/// Sliced Wasserstein distance SOSW_p on SO(3) with angle slicing.
pub fn sosw(mu: &So3Measure, nu: &So3Measure, budget: &SliceBudget) -> Result<DistanceEstimate> {
    budget.validate()?;
    let dirs = so3_directions(budget.slices, budget.seed);
    sosw_with_directions(mu, nu, &dirs, budget.p)
}

/// SOSW_p with caller-supplied slicing rotations.
pub fn sosw_with_directions(mu: &So3Measure, nu: &So3Measure, directions: &[Rotation], p: f64) -> Result<DistanceEstimate> {
    SliceBudget::new(directions.len(), 0, p)?;
    let uniform = same_uniform(mu, nu);
    let samples = map_indexed(directions.len(), |q| {
        let dir = &directions[q];
        let angles = |m: &So3Measure| -> Vec<f64> { m.points().iter().map(|r| slice_so3_angle(dir, r)).collect() };
        interval_cost(angles(mu), mu.weights(), angles(nu), nu.weights(), uniform, (0.0, std::f64::consts::PI), p)
    });
    Ok(DistanceEstimate::from_samples(&samples, p))
}

/// The even lift of a measure on SO(3) to S³: each rotation becomes ±q with
/// half its weight.
pub fn lift_to_s3(m: &So3Measure) -> (Vec<[f64; 4]>, Vec<f64>) {
    let mut pts = Vec::with_capacity(2 * m.len());
    let mut ws = Vec::with_capacity(2 * m.len());
    for (r, w) in m.points().iter().zip(m.weights()) {
        let q = Quaternion::from_rotation(r).to_array();
        pts.push(q);
        pts.push([-q[0], -q[1], -q[2], -q[3]]);
        ws.push(w / 2.0);
        ws.push(w / 2.0);
    }
    (pts, ws)
}

/// SOSW_p computed on S³: parallel slicing of the lifted quaternions along
/// uniform q ∈ S³, mapped through c(t) = 2 arccos|t| to [0, π].
pub fn sosw_via_s3(mu: &So3Measure, nu: &So3Measure, budget: &SliceBudget) -> Result<DistanceEstimate> {
    budget.validate()?;
    let dirs = sphere_directions(4, budget.slices, budget.seed);
    let (xa, xw) = lift_to_s3(mu);
    let (ya, yw) = lift_to_s3(nu);
    let uniform = same_uniform(mu, nu);
    let p = budget.p;
    let samples = map_indexed(dirs.len(), |q| {
        let psi = dirs[q].coords();
        let c = |pts: &[[f64; 4]]| -> Vec<f64> {
            pts.iter().map(|x| 2.0 * dot(x, psi).abs().min(1.0).acos()).collect()
        };
        interval_cost(c(&xa), &xw, c(&ya), &yw, uniform, (0.0, std::f64::consts::PI), p)
    });
    Ok(DistanceEstimate::from_samples(&samples, p))
}

/// Energy of the antipodal pair, ½PSW₂²(ν, δ_{e_d}) + ½PSW₂²(ν, δ_{−e_d}),
/// estimated per slice with shared directions.
pub fn antipodal_energy(nu: &SphereMeasure, budget: &SliceBudget) -> Result<DistanceEstimate> {
    budget.validate()?;
    let d = nu.dim();
    let dirs = sphere_directions(d, budget.slices, budget.seed);
    let flat = nu.flat_coords();
    let p = budget.p;
    let samples = map_indexed(dirs.len(), |q| {
        let psi = dirs[q].coords();
        let t = psi[d - 1];
        let xs: Vec<f64> = flat.chunks_exact(d).map(|x| dot(x, psi).clamp(-1.0, 1.0)).collect();
        let cost = |c: f64| -> f64 { xs.iter().zip(nu.weights()).map(|(x, w)| w * pow((x - c).abs(), p)).sum() };
        0.5 * cost(t) + 0.5 * cost(-t)
    });
    Ok(DistanceEstimate::from_samples(&samples, p))
}
