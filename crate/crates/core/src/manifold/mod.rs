//! Geometry of the sphere S^{d-1} and the rotation group SO(3).
//!
//! Points on the sphere are [`UnitVector`]s of any dimension `d >= 2`.
//! Rotations are stored as validated 3×3 matrices ([`Rotation`]) and convert
//! to and from axis–angle, ZYZ Euler angles and unit quaternions.
//!
//! Tangent vectors carry their base point: [`SphereTangent`] lives in the
//! hyperplane orthogonal to its base, [`So3Tangent`] is a matrix `V` with
//! `RᵀV` skew-symmetric.

mod quaternion;
mod rotation;
mod sphere;

pub use quaternion::{quat_to_rotation, Quaternion};
pub use rotation::{
    exp_so3, proj_tangent_so3, retract_so3_qr, rotation_angle, rotation_axis_angle,
    rotation_euler_zyz, sample_uniform_so3, So3Tangent, Rotation,
};
pub use sphere::{
    dot, exp_sphere, geodesic_dist_sphere, proj_tangent_sphere, sample_uniform_sphere,
    SphereTangent, UnitVector,
};

pub(crate) use sphere::{azimuth, exp_sphere_in_place};
#[cfg(test)]
pub(crate) use sphere::norm;
pub(crate) use rotation::{axis_angle_matrix, exp_skew, reorthonormalize, sample_one as sample_one_so3};
pub(crate) use sphere::sample_one as sample_one_sphere;
