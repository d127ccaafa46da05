//! Weighted point clouds and the slicing maps that push them to one
//! dimension.
//!
//! | kind            | domain  | direction | value                          |
//! |-----------------|---------|-----------|--------------------------------|
//! | `Parallel`      | S^{d-1} | ψ ∈ S^{d-1} | ⟨ξ, ψ⟩ ∈ [−1, 1]             |
//! | `Semicircular`  | S²      | ψ ∈ S²    | azimuth in the frame of ψ, on the circle |
//! | `So3Angle`      | SO(3)   | Q ∈ SO(3) | ∠(QᵀP) ∈ [0, π]                |
//! | `So3Trace`      | SO(3)   | Ψ ∈ SO(3) | tr(RᵀΨ) ∈ [−1, 3]              |

mod measure;
mod transform;

pub use measure::{DiscreteMeasure, ManifoldPoint, So3Measure, SphereMeasure};
pub use transform::{slice_transform_endpoint, slice_transform_function, so3_radon_function};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::{dot, rotation_angle, Rotation, UnitVector};
use crate::ot1d::{CircleMeasure, Measure1D};

/// Which scalar slicing map to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SliceKind {
    Parallel,
    Semicircular,
    So3Angle,
    So3Trace,
}

impl SliceKind {
    /// The interval the slice values live in (the circle for `Semicircular`).
    pub fn range(self) -> (f64, f64) {
        match self {
            SliceKind::Parallel => (-1.0, 1.0),
            SliceKind::Semicircular => (0.0, 2.0 * PI),
            SliceKind::So3Angle => (0.0, PI),
            SliceKind::So3Trace => (-1.0, 3.0),
        }
    }
}

/// A slicing direction: a unit vector for sphere slicing or a rotation for
/// SO(3) slicing.
#[derive(Debug, Clone, PartialEq)]
pub enum SliceDirection {
    Sphere(UnitVector),
    So3(Rotation),
}

/// ⟨ξ, ψ⟩.
pub fn slice_parallel(psi: &UnitVector, xi: &UnitVector) -> Result<f64> {
    if psi.dim() != xi.dim() {
        return Err(Error::DimensionMismatch { expected: psi.dim(), got: xi.dim() });
    }
    Ok(dot(psi.coords(), xi.coords()).clamp(-1.0, 1.0))
}

/// Result of a semicircular slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemicircleSlice {
    pub angle: f64,
    /// The point sits on a pole of the rotated frame, where the azimuth is
    /// undefined; `angle` is then 0.
    pub degenerate: bool,
}

/// The rotated frame eul(φ, θ, 0) of a direction ψ = Φ(φ, θ).
#[derive(Debug, Clone, Copy)]
pub struct SemicircleFrame {
    cp: f64,
    sp: f64,
    ct: f64,
    st: f64,
}

impl SemicircleFrame {
    pub fn new(psi: &UnitVector) -> Result<Self> {
        if psi.dim() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: psi.dim() });
        }
        let (phi, theta) = psi.to_spherical();
        let ((sp, cp), (st, ct)) = (phi.sin_cos(), theta.sin_cos());
        Ok(Self { cp, sp, ct, st })
    }

    /// azi(eul(φ, θ, 0)ᵀ ξ).
    #[inline]
    pub fn angle(&self, xi: &[f64]) -> SemicircleSlice {
        let (x, y, z) = (xi[0], xi[1], xi[2]);
        let x1 = self.cp * x + self.sp * y;
        let y1 = -self.sp * x + self.cp * y;
        let x2 = self.ct * x1 - self.st * z;
        if x2 * x2 + y1 * y1 < 1e-28 {
            return SemicircleSlice { angle: 0.0, degenerate: true };
        }
        SemicircleSlice { angle: crate::manifold::azimuth(x2, y1), degenerate: false }
    }

    /// Gradient of the azimuth with respect to ξ ∈ ℝ³ (not projected).
    #[inline]
    pub(crate) fn angle_gradient(&self, xi: &[f64]) -> [f64; 3] {
        let (x, y, z) = (xi[0], xi[1], xi[2]);
        let x1 = self.cp * x + self.sp * y;
        let y1 = -self.sp * x + self.cp * y;
        let x2 = self.ct * x1 - self.st * z;
        let r2 = x2 * x2 + y1 * y1;
        if r2 < 1e-28 {
            return [0.0; 3];
        }
        // d azi = (x2 dy1 − y1 dx2)/r², pulled back through the frame rotation.
        let (gx2, gy1) = (-y1 / r2, x2 / r2);
        let gx1 = gx2 * self.ct;
        let gz = -gx2 * self.st;
        [gx1 * self.cp - gy1 * self.sp, gx1 * self.sp + gy1 * self.cp, gz]
    }
}

/// A_ψ(ξ) = azi(eul(φ, θ, 0)ᵀ ξ) for ψ = Φ(φ, θ).
pub fn slice_semicircular(psi: &UnitVector, xi: &UnitVector) -> Result<SemicircleSlice> {
    if xi.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: xi.dim() });
    }
    Ok(SemicircleFrame::new(psi)?.angle(xi.coords()))
}

/// ∠(QᵀP).
pub fn slice_so3_angle(q: &Rotation, p: &Rotation) -> f64 {
    rotation_angle(&q.transpose().compose(p))
}

/// tr(Rᵀψ) = 1 + 2 cos ∠(ψᵀR).
pub fn slice_so3_trace(psi: &Rotation, r: &Rotation) -> f64 {
    r.matrix().component_mul(psi.matrix()).sum()
}

/// A one-dimensional image measure.
#[derive(Debug, Clone, PartialEq)]
pub enum Pushforward {
    Interval(Measure1D),
    Circle(CircleMeasure),
}

/// Pushes `m` forward along the slicing map `kind` with direction `dir`.
pub fn pushforward<P: ManifoldPoint>(
    m: &DiscreteMeasure<P>,
    dir: &SliceDirection,
    kind: SliceKind,
) -> Result<Pushforward> {
    let values = m.points().iter().map(|x| x.slice_value(dir, kind)).collect::<Result<Vec<f64>>>()?;
    if kind == SliceKind::Semicircular {
        return Ok(Pushforward::Circle(CircleMeasure::new(&values, m.weights())?));
    }
    let (lo, hi) = kind.range();
    let values: Vec<f64> = values.into_iter().map(|v| v.clamp(lo, hi)).collect();
    Ok(Pushforward::Interval(Measure1D::discrete_on(lo, hi, &values, m.weights())?))
}
