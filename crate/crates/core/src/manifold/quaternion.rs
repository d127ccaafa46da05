use nalgebra::{Matrix3, Vector3};

use super::rotation::Rotation;
use crate::error::{Error, Result};

/// A unit quaternion q = (q0, q′).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub q0: f64,
    pub qv: Vector3<f64>,
}

impl Quaternion {
    pub fn new(q0: f64, qv: Vector3<f64>) -> Result<Self> {
        let dev = (q0 * q0 + qv.norm_squared() - 1.0).abs();
        if !(dev <= 1e-12) {
            return Err(Error::NotUnit(dev));
        }
        Ok(Self { q0, qv })
    }

    pub fn from_array(a: [f64; 4]) -> Result<Self> {
        Self::new(a[0], Vector3::new(a[1], a[2], a[3]))
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.q0, self.qv.x, self.qv.y, self.qv.z]
    }

    pub fn identity() -> Self {
        Self { q0: 1.0, qv: Vector3::zeros() }
    }

    pub fn neg(&self) -> Self {
        Self { q0: -self.q0, qv: -self.qv }
    }

    pub fn conj(&self) -> Self {
        Self { q0: self.q0, qv: -self.qv }
    }

    /// The Hamilton product q⋄r = (q0 r0 − q′·r′, q0 r′ + r0 q′ + q′ × r′).
    pub fn mul(&self, r: &Quaternion) -> Self {
        Self {
            q0: self.q0 * r.q0 - self.qv.dot(&r.qv),
            qv: r.qv * self.q0 + self.qv * r.q0 + self.qv.cross(&r.qv),
        }
    }

    /// One of the two quaternions covering `r` (the one with q0 ≥ 0).
    pub fn from_rotation(r: &Rotation) -> Self {
        let m = r.matrix();
        let tr = m.trace();
        // Shepperd: pivot on the largest of the four squared components.
        let cand = [tr, m[(0, 0)], m[(1, 1)], m[(2, 2)]];
        let k = (0..4).max_by(|&a, &b| cand[a].total_cmp(&cand[b])).unwrap();
        let (q0, x, y, z);
        match k {
            0 => {
                let s = (1.0 + tr).sqrt() * 2.0;
                q0 = 0.25 * s;
                x = (m[(2, 1)] - m[(1, 2)]) / s;
                y = (m[(0, 2)] - m[(2, 0)]) / s;
                z = (m[(1, 0)] - m[(0, 1)]) / s;
            }
            1 => {
                let s = (1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]).sqrt() * 2.0;
                q0 = (m[(2, 1)] - m[(1, 2)]) / s;
                x = 0.25 * s;
                y = (m[(0, 1)] + m[(1, 0)]) / s;
                z = (m[(0, 2)] + m[(2, 0)]) / s;
            }
            2 => {
                let s = (1.0 + m[(1, 1)] - m[(0, 0)] - m[(2, 2)]).sqrt() * 2.0;
                q0 = (m[(0, 2)] - m[(2, 0)]) / s;
                x = (m[(0, 1)] + m[(1, 0)]) / s;
                y = 0.25 * s;
                z = (m[(1, 2)] + m[(2, 1)]) / s;
            }
            _ => {
                let s = (1.0 + m[(2, 2)] - m[(0, 0)] - m[(1, 1)]).sqrt() * 2.0;
                q0 = (m[(1, 0)] - m[(0, 1)]) / s;
                x = (m[(0, 2)] + m[(2, 0)]) / s;
                y = (m[(1, 2)] + m[(2, 1)]) / s;
                z = 0.25 * s;
            }
        }
        let mut q = Self { q0, qv: Vector3::new(x, y, z) };
        let n = (q.q0 * q.q0 + q.qv.norm_squared()).sqrt();
        q.q0 /= n;
        q.qv /= n;
        if q.q0 < 0.0 {
            q = q.neg();
        }
        q
    }
}

/// The double cover φ: S³ → SO(3), φ(q) = R_{q′/‖q′‖}(2 arccos q0).
///
/// Evaluated in the polynomial form (q0² − ‖q′‖²)I + 2q′q′ᵀ + 2q0[q′]ₓ, which
/// has no singularity at q0 = ±1 and is exactly even in q.
pub fn quat_to_rotation(q: &Quaternion) -> Rotation {
    let (w, v) = (q.q0, q.qv);
    let cross = Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0);
    let m = Matrix3::identity() * (w * w - v.norm_squared()) + v * v.transpose() * 2.0 + cross * (2.0 * w);
    Rotation::from_raw(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{rotation_angle, rotation_axis_angle, UnitVector};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn quat() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-1.0..1.0f64)
            .prop_filter("nonzero", |a| a.iter().map(|x| x * x).sum::<f64>() > 1e-3)
            .prop_map(|a| {
                let n = a.iter().map(|x| x * x).sum::<f64>().sqrt();
                Quaternion { q0: a[0] / n, qv: Vector3::new(a[1], a[2], a[3]) / n }
            })
    }

    #[test]
    fn identity_maps_to_identity() {
        assert_eq!(*quat_to_rotation(&Quaternion::identity()).matrix(), Matrix3::identity());
        assert_eq!(*quat_to_rotation(&Quaternion::identity().neg()).matrix(), Matrix3::identity());
    }

    #[test]
    fn half_angle_quaternion_is_axis_angle() {
        let n = UnitVector::normalize(vec![0.3, -0.2, 0.9]).unwrap();
        let w: f64 = 2.2;
        let nv = Vector3::from_column_slice(n.coords());
        let q = Quaternion::new((w / 2.0).cos(), nv * (w / 2.0).sin()).unwrap();
        let expect = rotation_axis_angle(&n, w).unwrap();
        assert_abs_diff_eq!(*quat_to_rotation(&q).matrix(), *expect.matrix(), epsilon = 1e-14);
    }

    proptest! {
        #[test]
        fn cover_is_a_homomorphism(q in quat(), r in quat()) {
            let lhs = quat_to_rotation(&q.mul(&r));
            let rhs = quat_to_rotation(&q).compose(&quat_to_rotation(&r));
            prop_assert!((lhs.matrix() - rhs.matrix()).abs().max() < 1e-12);
        }

        #[test]
        fn cover_is_even(q in quat()) {
            prop_assert_eq!(quat_to_rotation(&q), quat_to_rotation(&q.neg()));
        }

        #[test]
        fn angle_is_twice_arccos(q in quat()) {
            let w = rotation_angle(&quat_to_rotation(&q));
            prop_assert!((w - 2.0 * q.q0.abs().min(1.0).acos()).abs() < 1e-7);
        }

        #[test]
        fn from_rotation_inverts_cover(q in quat()) {
            let r = quat_to_rotation(&q);
            let p = Quaternion::from_rotation(&r);
            prop_assert!((quat_to_rotation(&p).matrix() - r.matrix()).abs().max() < 1e-12);
            let same = (p.q0 - q.q0).abs() + (p.qv - q.qv).norm();
            let flip = (p.q0 + q.q0).abs() + (p.qv + q.qv).norm();
            prop_assert!(same.min(flip) < 1e-10);
        }
    }
}
