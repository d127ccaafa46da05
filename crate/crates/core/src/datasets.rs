//! Experiment inputs on S² and SO(3).
//!
//! The shape measures are reproducible stand-ins with frozen constants:
//!
//! - croissant: uniform on the points within 20°/2 = 10° of the meridian
//!   half circle through +e¹ from the south to the north pole;
//! - smiley: mixture with probabilities ¼, ¼, ½ of two vMF eyes (κ = 80) at
//!   polar angle 25°, azimuths 60° and 120°, and a mouth that is uniform on
//!   the 90° arc at polar angle 35°, azimuths 225°..315°, blurred by vMF(400);
//! - equator: uniform on {ξ₃ = 0};
//! - antipodal-diracs: ½δ_{e³} + ½δ_{−e³}.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::SphereGrid;
use crate::manifold::{exp_skew, Rotation, UnitVector};
use crate::rng::{self, Rng};
use crate::slicing::{So3Measure, SphereMeasure};

/// Half-width of the croissant band.
const CROISSANT_HALF_WIDTH: f64 = 10.0 * PI / 180.0;
const SMILEY_EYE_KAPPA: f64 = 80.0;
const SMILEY_EYE_POLAR: f64 = 25.0 * PI / 180.0;
const SMILEY_EYE_AZIMUTHS: [f64; 2] = [60.0 * PI / 180.0, 120.0 * PI / 180.0];
const SMILEY_MOUTH_POLAR: f64 = 35.0 * PI / 180.0;
const SMILEY_MOUTH_AZIMUTHS: (f64, f64) = (225.0 * PI / 180.0, 315.0 * PI / 180.0);
const SMILEY_MOUTH_KAPPA: f64 = 400.0;

/// von Mises–Fisher distribution on S² with density
/// κ/(4π sinh κ) exp(κ⟨ξ, center⟩).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VmfParams {
    center: UnitVector,
    kappa: f64,
}

impl VmfParams {
    pub fn new(center: UnitVector, kappa: f64) -> Result<Self> {
        if center.dim() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: center.dim() });
        }
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::invalid(format!("concentration {kappa} must be positive and finite")));
        }
        Ok(Self { center, kappa })
    }

    pub fn center(&self) -> &UnitVector {
        &self.center
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// Two unit vectors completing `c` to a right-handed orthonormal frame.
fn frame(c: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let c = Vector3::from(c);
    let helper = if c.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let a = (helper - c * c.dot(&helper)).normalize();
    let b = c.cross(&a);
    (a.into(), b.into())
}

fn coords3(x: &UnitVector) -> [f64; 3] {
    [x.coords()[0], x.coords()[1], x.coords()[2]]
}

/// The point at angle `polar` from `c` and azimuth `azimuth` in the frame of `c`.
fn around(c: [f64; 3], cos_polar: f64, azimuth: f64) -> UnitVector {
    let (a, b) = frame(c);
    let s = (1.0 - cos_polar * cos_polar).max(0.0).sqrt();
    let (sa, ca) = azimuth.sin_cos();
    let v: Vec<f64> = (0..3).map(|i| cos_polar * c[i] + s * (ca * a[i] + sa * b[i])).collect();
    UnitVector::normalize(v).expect("frame vectors are orthonormal")
}

fn vmf_one(c: [f64; 3], kappa: f64, rng: &mut Rng) -> UnitVector {
    // Inverse CDF of w = ⟨ξ, c⟩, whose density is ∝ e^{κw} on [−1, 1].
    let u: f64 = rng.random();
    let w = (1.0 + (u + (1.0 - u) * (-2.0 * kappa).exp()).ln() / kappa).clamp(-1.0, 1.0);
    let azimuth = 2.0 * PI * rng.random::<f64>();
    around(c, w, azimuth)
}

/// n exact samples of vMF(params) with uniform weights.
pub fn vmf_sample(params: &VmfParams, n: usize, seed: u64) -> Result<SphereMeasure> {
    let c = coords3(&params.center);
    let mut rng = rng::seeded(seed);
    SphereMeasure::uniform((0..n).map(|_| vmf_one(c, params.kappa, &mut rng)).collect())
}

/// vMF density at ξ, evaluated as κ/(2π(1 − e^{−2κ})) e^{κ(⟨ξ,η⟩ − 1)} so
/// that neither large nor small κ overflows.
pub fn vmf_density(params: &VmfParams, xi: &[f64]) -> Result<f64> {
    if xi.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: xi.len() });
    }
    Ok(vmf_density_at(coords3(&params.center), params.kappa, xi))
}

fn vmf_density_at(c: [f64; 3], kappa: f64, xi: &[f64]) -> f64 {
    let w = c[0] * xi[0] + c[1] * xi[1] + c[2] * xi[2];
    kappa / (2.0 * PI * -(-2.0 * kappa).exp_m1()) * (kappa * (w - 1.0)).exp()
}

/// Named test measures on S².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Croissant,
    Smiley,
    Equator,
    AntipodalDiracs,
}

impl Shape {
    pub const ALL: [Shape; 4] = [Shape::Croissant, Shape::Smiley, Shape::Equator, Shape::AntipodalDiracs];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Croissant => "croissant",
            Shape::Smiley => "smiley",
            Shape::Equator => "equator",
            Shape::AntipodalDiracs => "antipodal-diracs",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Shape::ALL
            .into_iter()
            .find(|shape| shape.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown shape {s:?}")))
    }
}

/// n samples of a named shape with uniform weights; antipodal-diracs always
/// has its two support points.
pub fn shape_measure(shape: Shape, n: usize, seed: u64) -> Result<SphereMeasure> {
    if n == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    let mut rng = rng::seeded(seed);
    let points = match shape {
        Shape::Croissant => (0..n).map(|_| croissant_one(&mut rng)).collect(),
        Shape::Smiley => (0..n).map(|_| smiley_one(&mut rng)).collect(),
        Shape::Equator => (0..n)
            .map(|_| {
                let (s, c) = (2.0 * PI * rng.random::<f64>()).sin_cos();
                UnitVector::normalize(vec![c, s, 0.0]).expect("nonzero")
            })
            .collect(),
        Shape::AntipodalDiracs => {
            return SphereMeasure::uniform(vec![UnitVector::basis(3, 2), UnitVector::basis(3, 2).antipode()]);
        }
    };
    SphereMeasure::uniform(points)
}

/// A named shape with every sample rotated by `q`.
pub fn shape_measure_rotated(shape: Shape, n: usize, seed: u64, q: &Rotation) -> Result<SphereMeasure> {
    let m = shape_measure(shape, n, seed)?;
    let (points, weights) = m.into_parts();
    let points = points.iter().map(|x| q.rotate(x)).collect::<Result<Vec<_>>>()?;
    SphereMeasure::new(points, weights)
}

fn croissant_one(rng: &mut Rng) -> UnitVector {
    // Uniform on the slab |ξ₂| ≤ sin δ (ξ₂ is uniform under the surface
    // measure), kept when the nearest point of the half circle is within δ.
    let h = CROISSANT_HALF_WIDTH.sin();
    let pole_cos = CROISSANT_HALF_WIDTH.cos();
    loop {
        let y = h * (2.0 * rng.random::<f64>() - 1.0);
        let r = (1.0 - y * y).sqrt();
        let (s, c) = (2.0 * PI * rng.random::<f64>()).sin_cos();
        let (x, z) = (r * c, r * s);
        if x >= 0.0 || z.abs() >= pole_cos {
            return UnitVector::normalize(vec![x, y, z]).expect("nonzero");
        }
    }
}

fn smiley_one(rng: &mut Rng) -> UnitVector {
    let north = [0.0, 0.0, 1.0];
    let on_face = |azimuth: f64, polar: f64| coords3(&around(north, polar.cos(), azimuth));
    let u: f64 = rng.random();
    if u < 0.5 {
        let eye = on_face(SMILEY_EYE_AZIMUTHS[usize::from(u >= 0.25)], SMILEY_EYE_POLAR);
        vmf_one(eye, SMILEY_EYE_KAPPA, rng)
    } else {
        let (lo, hi) = SMILEY_MOUTH_AZIMUTHS;
        let spot = on_face(lo + (hi - lo) * rng.random::<f64>(), SMILEY_MOUTH_POLAR);
        vmf_one(spot, SMILEY_MOUTH_KAPPA, rng)
    }
}

/// Kernel density estimate Σ w_k vMF(x_k, κ)(ξ) at the grid nodes.
pub fn kde_vmf(m: &SphereMeasure, kappa: f64, grid: &SphereGrid) -> Result<Vec<f64>> {
    if m.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: m.dim() });
    }
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::invalid(format!("kernel concentration {kappa} must be positive and finite")));
    }
    let centers: Vec<[f64; 3]> = m.points().iter().map(coords3).collect();
    let nodes = grid.points();
    Ok(crate::par::map_indexed(nodes.len(), |i| {
        centers.iter().zip(m.weights()).map(|(c, w)| w * vmf_density_at(*c, kappa, &nodes[i])).sum()
    }))
}

/// n rotations center · exp([σ g]ₓ) with g standard normal in R³.
pub fn so3_cluster(center: &Rotation, spread: f64, n: usize, seed: u64) -> Result<So3Measure> {
    if !(spread >= 0.0) || !spread.is_finite() {
        return Err(Error::invalid(format!("spread {spread} must be nonnegative and finite")));
    }
    let mut rng = rng::seeded(seed);
    let points = (0..n)
        .map(|_| {
            let g: [f64; 3] = std::array::from_fn(|_| spread * rng.sample::<f64, _>(StandardNormal));
            let skew = Matrix3::new(0.0, -g[2], g[1], g[2], 0.0, -g[0], -g[1], g[0], 0.0);
            Rotation::from_matrix(center.matrix() * exp_skew(&skew))
        })
        .collect::<Result<Vec<_>>>()?;
    So3Measure::uniform(points)
}
