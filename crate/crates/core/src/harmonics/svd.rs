use num_complex::Complex64;

use super::legendre::{harmonic_dim, legendre_normalized_table, sphere_surface};
use super::quadrature::{SphereGrid, TGrid};
use super::sph::{azimuth_table, AssocLegendre, SphereCoeffs};
use crate::error::{Error, Result};
use crate::manifold::UnitVector;

/// Singular values λ_{n,d} = √(|S^{d−2}| / (|S^{d−1}| N_{n,d})) of the parallel
/// slice transform on S^{d−1}.
pub fn slice_svd_singular_value(n: usize, d: usize) -> f64 {
    (sphere_surface(d - 1) / (sphere_surface(d) * harmonic_dim(n, d))).sqrt()
}

/// (U_ψ f)(t) for each t in `ts`, f given by its coefficients.
pub fn slice_svd_forward(coeffs: &SphereCoeffs, psi: &UnitVector, ts: &[f64]) -> Result<Vec<f64>> {
    if psi.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: psi.dim() });
    }
    if let Some(t) = ts.iter().find(|t| !(-1.0..=1.0).contains(*t)) {
        return Err(Error::invalid(format!("slice coordinate {t} outside [-1, 1]")));
    }
    let degree = coeffs.degree();
    let c = psi.coords();
    let leg = AssocLegendre::new(degree, c[2]);
    let phi = crate::manifold::azimuth(c[0], c[1]);
    let y: Vec<f64> = (0..=degree)
        .map(|n| {
            (-(n as i64)..=n as i64)
                .map(|k| coeffs.get(n, k) * leg.signed(n, k) * Complex64::from_polar(1.0, k as f64 * phi))
                .sum::<Complex64>()
                .re
        })
        .collect();
    let lam: Vec<f64> = (0..=degree).map(|n| slice_svd_singular_value(n, 3)).collect();
    Ok(ts
        .iter()
        .map(|t| {
            let p = legendre_normalized_table(degree, 3, *t);
            (0..=degree).map(|n| lam[n] * p[n] * y[n]).sum()
        })
        .collect())
}

/// Degree components f_n = Σ_k c_{n,k} Y_n^k at every grid node (real parts),
/// one vector per degree.
pub fn degree_fields(coeffs: &SphereCoeffs, grid: &SphereGrid) -> Vec<Vec<f64>> {
    let degree = coeffs.degree();
    let np = grid.n_phi();
    let tw = azimuth_table(grid, degree);
    let mut out = vec![vec![0.0; grid.len()]; degree + 1];
    for i in 0..grid.n_theta() {
        let leg = AssocLegendre::new(degree, grid.cos_thetas()[i]);
        for (n, field) in out.iter_mut().enumerate() {
            let ring = &mut field[i * np..(i + 1) * np];
            for k in -(n as i64)..=n as i64 {
                let a = coeffs.get(n, k) * leg.signed(n, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let m = k.unsigned_abs() as usize;
                for (v, e) in ring.iter_mut().zip(&tw[m * np..(m + 1) * np]) {
                    let e = if k < 0 { e.conj() } else { *e };
                    *v += (a * e).re;
                }
            }
        }
    }
    out
}

/// U f on all (ψ_p, t_ℓ) pairs, row-major with one row of `tgrid.len()`
/// values per grid direction.
pub fn slice_svd_forward_grid(coeffs: &SphereCoeffs, grid: &SphereGrid, tgrid: &TGrid) -> Vec<f64> {
    let degree = coeffs.degree();
    let fields = degree_fields(coeffs, grid);
    let basis: Vec<Vec<f64>> = tgrid
        .nodes()
        .iter()
        .map(|t| {
            let p = legendre_normalized_table(degree, 3, *t);
            (0..=degree).map(|n| slice_svd_singular_value(n, 3) * p[n]).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(grid.len() * tgrid.len());
    for p in 0..grid.len() {
        for b in &basis {
            out.push((0..=degree).map(|n| b[n] * fields[n][p]).sum());
        }
    }
    out
}

/// Moore–Penrose pseudoinverse of the slice transform restricted to degree D:
/// ĉ_{n,k} = λ_n⁻¹ Σ_p w_p conj(Y_n^k(ψ_p)) Σ_ℓ v_ℓ g(ψ_p, t_ℓ) P̃_{n,3}(t_ℓ).
pub fn slice_svd_pinv(g: &[f64], grid: &SphereGrid, tgrid: &TGrid, degree: usize) -> Result<SphereCoeffs> {
    let l = tgrid.len();
    if g.len() != grid.len() * l {
        return Err(Error::DimensionMismatch { expected: grid.len() * l, got: g.len() });
    }
    if !grid.supports_degree(degree) {
        return Err(Error::invalid(format!(
            "degree {degree} needs quadrature exactness {}, grid has {}",
            2 * degree,
            grid.exactness()
        )));
    }
    // h_n(ψ_p) = Σ_ℓ v_ℓ g(ψ_p, t_ℓ) P̃_n(t_ℓ)
    let tab: Vec<Vec<f64>> = tgrid
        .nodes()
        .iter()
        .zip(tgrid.weights())
        .map(|(t, v)| legendre_normalized_table(degree, 3, *t).into_iter().map(|p| p * v).collect())
        .collect();
    let np = grid.n_phi();
    let tw = azimuth_table(grid, degree);
    let mut out = SphereCoeffs::zeros(degree);
    let mut h = vec![0.0; (degree + 1) * np];
    for i in 0..grid.n_theta() {
        h.iter_mut().for_each(|v| *v = 0.0);
        for j in 0..np {
            let row = &g[(i * np + j) * l..(i * np + j + 1) * l];
            for (gv, pt) in row.iter().zip(&tab) {
                for n in 0..=degree {
                    h[n * np + j] += gv * pt[n];
                }
            }
        }
        let leg = AssocLegendre::new(degree, grid.cos_thetas()[i]);
        let w = grid.ring_weight(i);
        for n in 0..=degree {
            let ring = &h[n * np..(n + 1) * np];
            let scale = w / slice_svd_singular_value(n, 3);
            for m in 0..=n {
                let f: Complex64 = ring.iter().zip(&tw[m * np..(m + 1) * np]).map(|(v, e)| e.conj() * *v).sum();
                let idx = SphereCoeffs::index(n, m as i64);
                out.as_mut_slice()[idx] += f * (scale * leg.get(n, m));
            }
        }
    }
    for n in 0..=degree {
        for m in 1..=n as i64 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let v = out.get(n, m).conj() * sign;
            out.set(n, -m, v);
        }
    }
    Ok(out)
}
