use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

const UNIT_TOL: f64 = 1e-12;
const TANGENT_TOL: f64 = 1e-10;

/// A point on S^{d-1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UnitVector {
    coords: Vec<f64>,
}

impl UnitVector {
    /// Accepts `coords` if its norm is 1 within 1e-12.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_dim(coords.len())?;
        let dev = (norm(&coords) - 1.0).abs();
        if !(dev <= UNIT_TOL) {
            return Err(Error::NotUnit(dev));
        }
        Ok(Self { coords })
    }

    /// Scales a nonzero vector onto the sphere.
    pub fn normalize(mut coords: Vec<f64>) -> Result<Self> {
        check_dim(coords.len())?;
        let n = norm(&coords);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::invalid("cannot normalize a zero or non-finite vector"));
        }
        coords.iter_mut().for_each(|c| *c /= n);
        Ok(Self { coords })
    }

    /// The canonical basis vector e_{i+1} of R^dim.
    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(dim >= 2 && i < dim, "basis vector e{} not in R^{dim}", i + 1);
        let mut coords = vec![0.0; dim];
        coords[i] = 1.0;
        Self { coords }
    }

    /// Φ(φ, θ) = (cos φ sin θ, sin φ sin θ, cos θ) with azimuth φ and polar angle θ.
    pub fn from_spherical(phi: f64, theta: f64) -> Self {
        let (sp, cp) = phi.sin_cos();
        let (st, ct) = theta.sin_cos();
        Self { coords: vec![cp * st, sp * st, ct] }
    }

    /// Inverse of [`from_spherical`](Self::from_spherical) for d = 3: (φ ∈ [0, 2π), θ ∈ [0, π]).
    pub fn to_spherical(&self) -> (f64, f64) {
        let c = &self.coords;
        let theta = c[0].hypot(c[1]).atan2(c[2]);
        (azimuth(c[0], c[1]), theta)
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!((norm(&coords) - 1.0).abs() < 1e-9);
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        dot(&self.coords, &other.coords)
    }

    pub fn antipode(&self) -> Self {
        Self { coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl TryFrom<Vec<f64>> for UnitVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        UnitVector::new(v)
    }
}

impl From<UnitVector> for Vec<f64> {
    fn from(u: UnitVector) -> Self {
        u.coords
    }
}

/// A tangent vector to the sphere at `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereTangent {
    base: UnitVector,
    vec: Vec<f64>,
}

impl SphereTangent {
    pub fn new(base: UnitVector, vec: Vec<f64>) -> Result<Self> {
        if vec.len() != base.dim() {
            return Err(Error::DimensionMismatch { expected: base.dim(), got: vec.len() });
        }
        let r = dot(base.coords(), &vec).abs();
        if r > TANGENT_TOL * norm(&vec).max(1.0) {
            return Err(Error::NotTangent(r));
        }
        Ok(Self { base, vec })
    }

    pub fn base(&self) -> &UnitVector {
        &self.base
    }

    pub fn vec(&self) -> &[f64] {
        &self.vec
    }

    pub fn norm(&self) -> f64 {
        norm(&self.vec)
    }
}

/// Inner product with four independent accumulators so the loop vectorizes.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let (ca, ra) = a.split_at(a.len() - a.len() % 4);
    let (cb, rb) = b.split_at(ca.len());
    for (x, y) in ca.chunks_exact(4).zip(cb.chunks_exact(4)) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ra.iter().zip(rb) {
        s += x * y;
    }
    s
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn azimuth(x: f64, y: f64) -> f64 {
    let a = y.atan2(x);
    if a < 0.0 {
        let w = a + std::f64::consts::TAU;
        // atan2 can return -0.0 or a value so close to 0 that adding 2π rounds to 2π.
        if w >= std::f64::consts::TAU {
            0.0
        } else {
            w
        }
    } else {
        a
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::invalid(format!("sphere dimension must be at least 2, got {d}")));
    }
    Ok(())
}

fn check_same_dim(a: &UnitVector, b: &UnitVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(())
}

/// Great-circle distance arccos⟨a, b⟩.
pub fn geodesic_dist_sphere(a: &UnitVector, b: &UnitVector) -> Result<f64> {
    check_same_dim(a, b)?;
    Ok(a.dot(b).clamp(-1.0, 1.0).acos())
}

/// exp_x(v) = cos‖v‖ x + sin‖v‖ v/‖v‖.
pub fn exp_sphere(x: &UnitVector, v: &[f64]) -> Result<UnitVector> {
    if v.len() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: v.len() });
    }
    let r = dot(x.coords(), v).abs();
    if r > TANGENT_TOL * norm(v).max(1.0) {
        return Err(Error::NotTangent(r));
    }
    let mut out = x.coords.clone();
    exp_sphere_in_place(&mut out, v);
    Ok(UnitVector { coords: out })
}

/// Moves `x` along the tangent vector `v` in place and renormalizes.
pub(crate) fn exp_sphere_in_place(x: &mut [f64], v: &[f64]) {
    let nv = norm(v);
    if nv < 1e-14 {
        return;
    }
    let (s, c) = nv.sin_cos();
    let k = s / nv;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi = c * *xi + k * vi;
    }
    // One rounding-level correction keeps long SGD runs on the sphere.
    let n = norm(x);
    x.iter_mut().for_each(|xi| *xi /= n);
}

/// v − ⟨x, v⟩x.
pub fn proj_tangent_sphere(x: &UnitVector, v: &[f64]) -> Result<SphereTangent> {
    if v.len() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: v.len() });
    }
    let a = dot(x.coords(), v);
    let vec = v.iter().zip(x.coords()).map(|(vi, xi)| vi - a * xi).collect();
    Ok(SphereTangent { base: x.clone(), vec })
}

/// `n` i.i.d. uniform points on S^{dim-1}, as normalized Gaussian vectors.
pub fn sample_uniform_sphere(dim: usize, n: usize, seed: u64) -> Result<Vec<UnitVector>> {
    check_dim(dim)?;
    let mut rng = rng::seeded(seed);
    Ok((0..n).map(|_| sample_one(dim, &mut rng)).collect())
}

pub(crate) fn sample_one(dim: usize, rng: &mut rng::Rng) -> UnitVector {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = norm(&v);
        if n > 1e-300 {
            return UnitVector { coords: v.into_iter().map(|c| c / n).collect() };
        }
    }
}
