use nalgebra::{Matrix3, Vector3};
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};

use super::sphere::UnitVector;
use crate::error::{Error, Result};
use crate::rng;

const ROT_TOL: f64 = 1e-10;

/// An element of SO(3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 9]", into = "[f64; 9]")]
pub struct Rotation {
    m: Matrix3<f64>,
}

impl Rotation {
    pub fn identity() -> Self {
        Self { m: Matrix3::identity() }
    }

    /// Accepts `m` if `mᵀm = I` and `det m = 1` within 1e-10.
    pub fn from_matrix(m: Matrix3<f64>) -> Result<Self> {
        let dev = (m.transpose() * m - Matrix3::identity()).abs().max();
        if !(dev <= ROT_TOL) {
            return Err(Error::NotRotation(format!("orthogonality defect {dev:e}")));
        }
        let det = m.determinant();
        if (det - 1.0).abs() > ROT_TOL {
            return Err(Error::NotRotation(format!("determinant {det}")));
        }
        Ok(Self { m })
    }

    /// Row-major entries.
    pub fn from_row_major(a: [f64; 9]) -> Result<Self> {
        Self::from_matrix(Matrix3::from_row_slice(&a))
    }

    pub fn to_row_major(&self) -> [f64; 9] {
        let m = &self.m;
        [m[(0, 0)], m[(0, 1)], m[(0, 2)], m[(1, 0)], m[(1, 1)], m[(1, 2)], m[(2, 0)], m[(2, 1)], m[(2, 2)]]
    }

    pub(crate) fn from_raw(m: Matrix3<f64>) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn transpose(&self) -> Self {
        Self { m: self.m.transpose() }
    }

    pub fn compose(&self, other: &Rotation) -> Self {
        Self { m: self.m * other.m }
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    pub fn rotate(&self, x: &UnitVector) -> Result<UnitVector> {
        if x.dim() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: x.dim() });
        }
        let v = self.m * Vector3::from_column_slice(x.coords());
        Ok(UnitVector::from_raw(v.as_slice().to_vec()))
    }

    /// ZYZ Euler angles (α, β, γ) with `self = R_z(α) R_y(β) R_z(γ)`,
    /// α, γ ∈ [0, 2π) and β ∈ [0, π]. At β ∈ {0, π} only α ± γ is determined
    /// and γ is set to 0.
    pub fn to_euler_zyz(&self) -> (f64, f64, f64) {
        let m = &self.m;
        let s = m[(0, 2)].hypot(m[(1, 2)]);
        let beta = s.atan2(m[(2, 2)]);
        if s < 1e-12 {
            let alpha = if m[(2, 2)] > 0.0 {
                m[(1, 0)].atan2(m[(0, 0)])
            } else {
                (-m[(0, 1)]).atan2(m[(1, 1)])
            };
            return (wrap(alpha), beta, 0.0);
        }
        let alpha = m[(1, 2)].atan2(m[(0, 2)]);
        let gamma = m[(2, 1)].atan2(-m[(2, 0)]);
        (wrap(alpha), beta, wrap(gamma))
    }

    /// Axis and angle ω ∈ [0, π]. For ω = 0 the axis is e³.
    pub fn to_axis_angle(&self) -> (UnitVector, f64) {
        let m = &self.m;
        let omega = rotation_angle(self);
        let skew = Vector3::new(m[(2, 1)] - m[(1, 2)], m[(0, 2)] - m[(2, 0)], m[(1, 0)] - m[(0, 1)]);
        if omega.sin() >= 1e-6 {
            let n = skew / skew.norm();
            return (UnitVector::from_raw(n.as_slice().to_vec()), omega);
        }
        if omega < FRAC_PI_2 {
            let n = skew.try_normalize(1e-300).unwrap_or_else(Vector3::z);
            return (UnitVector::from_raw(n.as_slice().to_vec()), omega);
        }
        // Near π the symmetric part (R + I)/2 ≈ nnᵀ; take its dominant column.
        let sym = (m + Matrix3::identity()) * 0.5;
        let i = (0..3).max_by(|&a, &b| sym[(a, a)].total_cmp(&sym[(b, b)])).unwrap();
        let mut n = sym.column(i).into_owned().normalize();
        if n.dot(&skew) < 0.0 {
            n = -n;
        }
        (UnitVector::from_raw(n.as_slice().to_vec()), omega)
    }
}

impl TryFrom<[f64; 9]> for Rotation {
    type Error = Error;
    fn try_from(a: [f64; 9]) -> Result<Self> {
        Rotation::from_row_major(a)
    }
}

impl From<Rotation> for [f64; 9] {
    fn from(r: Rotation) -> Self {
        r.to_row_major()
    }
}

impl std::ops::Mul for Rotation {
    type Output = Rotation;
    fn mul(self, rhs: Rotation) -> Rotation {
        self.compose(&rhs)
    }
}

fn wrap(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// A tangent vector `V` at `base`, i.e. `baseᵀV` is skew-symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct So3Tangent {
    base: Rotation,
    mat: Matrix3<f64>,
}

impl So3Tangent {
    pub fn new(base: Rotation, mat: Matrix3<f64>) -> Result<Self> {
        let a = base.m.transpose() * mat;
        let r = (a + a.transpose()).abs().max();
        if r > ROT_TOL * mat.abs().max().max(1.0) {
            return Err(Error::NotTangent(r));
        }
        Ok(Self { base, mat })
    }

    pub fn zero(base: Rotation) -> Self {
        Self { base, mat: Matrix3::zeros() }
    }

    pub fn base(&self) -> &Rotation {
        &self.base
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.mat
    }

    /// Scales the vector, keeping the base.
    pub fn scaled(&self, s: f64) -> Self {
        Self { base: self.base, mat: self.mat * s }
    }
}

fn hat(w: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

fn vee(s: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(s[(2, 1)] - s[(1, 2)], s[(0, 2)] - s[(2, 0)], s[(1, 0)] - s[(0, 1)]) * 0.5
}

/// Rodrigues' formula R_n(ω) = cos ω I + sin ω [n]ₓ + (1 − cos ω) nnᵀ.
pub fn rotation_axis_angle(n: &UnitVector, omega: f64) -> Result<Rotation> {
    if n.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: n.dim() });
    }
    let n = Vector3::from_column_slice(n.coords());
    Ok(Rotation { m: axis_angle_matrix(&n, omega) })
}

pub(crate) fn axis_angle_matrix(n: &Vector3<f64>, omega: f64) -> Matrix3<f64> {
    let (s, c) = omega.sin_cos();
    Matrix3::identity() * c + hat(n) * s + n * n.transpose() * (1.0 - c)
}

pub(crate) fn rz(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

pub(crate) fn ry(b: f64) -> Matrix3<f64> {
    let (s, c) = b.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

/// R_z(α) R_y(β) R_z(γ).
pub fn rotation_euler_zyz(alpha: f64, beta: f64, gamma: f64) -> Rotation {
    Rotation { m: rz(alpha) * ry(beta) * rz(gamma) }
}

/// arccos((tr R − 1)/2) ∈ [0, π].
pub fn rotation_angle(r: &Rotation) -> f64 {
    ((r.trace() - 1.0) * 0.5).clamp(-1.0, 1.0).acos()
}

/// `n` Haar-distributed rotations from Euler angles α, γ ~ U[0, 2π),
/// β = arccos t with t ~ U[−1, 1].
pub fn sample_uniform_so3(n: usize, seed: u64) -> Vec<Rotation> {
    let mut rng = rng::seeded(seed);
    (0..n).map(|_| sample_one(&mut rng)).collect()
}

pub(crate) fn sample_one(rng: &mut rng::Rng) -> Rotation {
    let a = rng.random::<f64>() * TAU;
    let g = rng.random::<f64>() * TAU;
    let t: f64 = rng.random_range(-1.0..=1.0);
    rotation_euler_zyz(a, t.acos(), g)
}

/// (A − R Aᵀ R)/2, the orthogonal projection onto T_R SO(3).
pub fn proj_tangent_so3(r: &Rotation, a: &Matrix3<f64>) -> So3Tangent {
    So3Tangent { base: *r, mat: (a - r.m * a.transpose() * r.m) * 0.5 }
}

/// exp(S) for skew-symmetric S via Rodrigues.
pub(crate) fn exp_skew(s: &Matrix3<f64>) -> Matrix3<f64> {
    let w = vee(s);
    let th = w.norm();
    let th2 = th * th;
    let (a, b) = if th < 1e-4 {
        (1.0 - th2 / 6.0 + th2 * th2 / 120.0, 0.5 - th2 / 24.0 + th2 * th2 / 720.0)
    } else {
        (th.sin() / th, (1.0 - th.cos()) / th2)
    };
    let h = hat(&w);
    Matrix3::identity() + h * a + h * h * b
}

/// R·exp(RᵀV).
pub fn exp_so3(r: &Rotation, v: &So3Tangent) -> Rotation {
    let s = r.m.transpose() * v.mat;
    let s = (s - s.transpose()) * 0.5;
    Rotation { m: r.m * exp_skew(&s) }
}

/// First-order retraction qf(R + V): the Q factor of a QR decomposition with
/// positive diagonal in R.
pub fn retract_so3_qr(r: &Rotation, v: &So3Tangent) -> Rotation {
    let a = r.m + v.mat;
    let mut q = Matrix3::<f64>::zeros();
    for j in 0..3 {
        let mut c = a.column(j).into_owned();
        for i in 0..j {
            let qi = q.column(i).into_owned();
            c -= qi * qi.dot(&c);
        }
        q.set_column(j, &c.normalize());
    }
    Rotation { m: q }
}

/// Nearest rotation in Frobenius norm (polar factor), used to remove drift.
pub(crate) fn reorthonormalize(m: &Matrix3<f64>) -> Matrix3<f64> {
    let svd = m.svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut d = Matrix3::identity();
    if (u * vt).determinant() < 0.0 {
        d[(2, 2)] = -1.0;
    }
    u * d * vt
}
