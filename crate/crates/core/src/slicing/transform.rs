use std::f64::consts::PI;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::harmonics::SphereGrid;
use crate::manifold::{Rotation, UnitVector};

/// Orthonormal {u, v} spanning ψ^⊥, built against the least-aligned axis.
fn circle_frame(psi: &[f64]) -> ([f64; 3], [f64; 3]) {
    let axis = (0..3).min_by(|&a, &b| psi[a].abs().total_cmp(&psi[b].abs())).unwrap_or(0);
    let mut u = [0.0; 3];
    u[axis] = 1.0;
    for (ui, p) in u.iter_mut().zip(psi) {
        *ui -= psi[axis] * p;
    }
    let nu = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    u.iter_mut().for_each(|x| *x /= nu);
    let v = [psi[1] * u[2] - psi[2] * u[1], psi[2] * u[0] - psi[0] * u[2], psi[0] * u[1] - psi[1] * u[0]];
    (u, v)
}

/// Parallel slice transform (U_ψ f)(t) on S², the mean of f over the
/// subcircle {ξ : ⟨ξ, ψ⟩ = t} scaled by 1/2, by the trapezoidal rule with
/// `quad_order` nodes. At t = ±1 the continuous limit f(±ψ)/2 is returned.
pub fn slice_transform_function<F>(f: F, psi: &UnitVector, t: f64, quad_order: usize) -> Result<f64>
where
    F: Fn(&UnitVector) -> f64,
{
    if psi.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: psi.dim() });
    }
    if quad_order < 8 {
        return Err(Error::invalid(format!("quadrature order {quad_order} below 8")));
    }
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::invalid(format!("slice coordinate {t} outside [-1, 1]")));
    }
    let p = psi.coords();
    if t.abs() == 1.0 {
        let pole = if t > 0.0 { psi.clone() } else { psi.antipode() };
        return Ok(slice_transform_endpoint(3, f(&pole)));
    }
    let (u, v) = circle_frame(p);
    let r = (1.0 - t * t).sqrt();
    let mut acc = 0.0;
    for m in 0..quad_order {
        let (s, c) = (2.0 * PI * m as f64 / quad_order as f64).sin_cos();
        let x: Vec<f64> = (0..3).map(|i| t * p[i] + r * (c * u[i] + s * v[i])).collect();
        acc += f(&UnitVector::normalize(x)?);
    }
    Ok(acc / (2.0 * quad_order as f64))
}

/// Value of the slice transform at t = ±1 on S^{d−1} given f at the pole:
/// f/2 for d = 3 and 0 for d > 3.
pub fn slice_transform_endpoint(dim: usize, f_pole: f64) -> f64 {
    if dim == 3 {
        f_pole / 2.0
    } else {
        0.0
    }
}

/// Radon transform on SO(3),
/// (T f)(Q, ω) = (1 − cos ω)/(4π²) ∫_{S²} f(Q R_ξ(ω)) dσ(ξ),
/// with the sphere integral taken on `grid`.
pub fn so3_radon_function<F>(f: F, q: &Rotation, omega: f64, grid: &SphereGrid) -> f64
where
    F: Fn(&Rotation) -> f64,
{
    let scale = (1.0 - omega.cos()) / (4.0 * PI * PI);
    if scale == 0.0 {
        return 0.0;
    }
    let w = grid.weights();
    let sum: f64 = grid
        .points()
        .iter()
        .zip(&w)
        .map(|(x, w)| {
            let axis = Vector3::new(x[0], x[1], x[2]);
            let r = Rotation::from_raw(crate::manifold::axis_angle_matrix(&axis, omega));
            w * f(&q.compose(&r))
        })
        .sum();
    scale * sum
}
