use serde::{Deserialize, Serialize};

use super::{SliceDirection, SliceKind};
use crate::error::{check_simplex, Error, Result};
use crate::manifold::{Rotation, UnitVector};

/// A point type the slicing maps act on.
pub trait ManifoldPoint: Clone {
    /// Ambient dimension used for consistency checks (3 for rotations).
    fn ambient_dim(&self) -> usize;

    /// The scalar slice of `self` along `dir`.
    fn slice_value(&self, dir: &SliceDirection, kind: SliceKind) -> Result<f64>;

    /// The slicing that is linear in the ambient coordinates.
    const LINEAR_KIND: SliceKind;

    /// Coordinates in the ambient Euclidean space (rotations row-major).
    fn ambient_coords(&self) -> Vec<f64>;
}

impl ManifoldPoint for UnitVector {
    const LINEAR_KIND: SliceKind = SliceKind::Parallel;

    fn ambient_coords(&self) -> Vec<f64> {
        self.coords().to_vec()
    }

    fn ambient_dim(&self) -> usize {
        self.dim()
    }

    fn slice_value(&self, dir: &SliceDirection, kind: SliceKind) -> Result<f64> {
        match (dir, kind) {
            (SliceDirection::Sphere(psi), SliceKind::Parallel) => super::slice_parallel(psi, self),
            (SliceDirection::Sphere(psi), SliceKind::Semicircular) => {
                Ok(super::slice_semicircular(psi, self)?.angle)
            }
            _ => Err(Error::invalid(format!("slice kind {kind:?} does not apply to sphere points with this direction"))),
        }
    }
}

impl ManifoldPoint for Rotation {
    const LINEAR_KIND: SliceKind = SliceKind::So3Trace;

    fn ambient_coords(&self) -> Vec<f64> {
        self.to_row_major().to_vec()
    }

    fn ambient_dim(&self) -> usize {
        3
    }

    fn slice_value(&self, dir: &SliceDirection, kind: SliceKind) -> Result<f64> {
        match (dir, kind) {
            (SliceDirection::So3(q), SliceKind::So3Angle) => Ok(super::slice_so3_angle(q, self)),
            (SliceDirection::So3(q), SliceKind::So3Trace) => Ok(super::slice_so3_trace(q, self)),
            _ => Err(Error::invalid(format!("slice kind {kind:?} does not apply to rotations with this direction"))),
        }
    }
}

/// A weighted point cloud Σ w_k δ_{x_k}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure<P> {
    points: Vec<P>,
    weights: Vec<f64>,
}

pub type SphereMeasure = DiscreteMeasure<UnitVector>;
pub type So3Measure = DiscreteMeasure<Rotation>;

impl<P: ManifoldPoint> DiscreteMeasure<P> {
    /// Weights must lie on the simplex within 1e-9; they are renormalized to
    /// sum to one unless they already do to rounding level.
    pub fn new(points: Vec<P>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("a measure needs at least one point"));
        }
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), got: weights.len() });
        }
        let d = points[0].ambient_dim();
        if let Some(p) = points.iter().find(|p| p.ambient_dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: p.ambient_dim() });
        }
        check_simplex(&weights, 1e-9)?;
        let total: f64 = weights.iter().sum();
        // Weights already normalized to rounding level are kept as given, so
        // normalization is idempotent.
        if (total - 1.0).abs() <= 4.0 * weights.len() as f64 * f64::EPSILON {
            return Ok(Self { points, weights });
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(Self { points, weights })
    }

    /// Equal weights 1/N.
    pub fn uniform(points: Vec<P>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![1.0 / n.max(1) as f64; n])
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].ambient_dim()
    }

    /// True when all weights are equal.
    pub fn is_uniform(&self) -> bool {
        let w0 = self.weights[0];
        self.weights.iter().all(|w| (w - w0).abs() <= 1e-15)
    }

    /// Applies `f` to every point, keeping the weights.
    pub fn map_points<Q: ManifoldPoint>(&self, f: impl Fn(&P) -> Q) -> DiscreteMeasure<Q> {
        DiscreteMeasure { points: self.points.iter().map(f).collect(), weights: self.weights.clone() }
    }

    pub fn into_parts(self) -> (Vec<P>, Vec<f64>) {
        (self.points, self.weights)
    }
}

impl SphereMeasure {
    /// Row-major N × d coordinate buffer.
    pub fn flat_coords(&self) -> Vec<f64> {
        self.points.iter().flat_map(|p| p.coords().iter().copied()).collect()
    }

    /// Rebuilds a measure from a row-major buffer of unit vectors.
    pub(crate) fn from_flat(dim: usize, flat: &[f64], weights: Vec<f64>) -> Self {
        let points = flat.chunks_exact(dim).map(|c| UnitVector::from_raw(c.to_vec())).collect();
        Self { points, weights }
    }
}
