use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::SphereGrid;
use crate::error::{Error, Result};
use crate::manifold::{azimuth, UnitVector};

/// Orthonormal associated Legendre functions P̄_n^m(t), 0 ≤ m ≤ n ≤ D, with
/// the Condon–Shortley phase, so that Y_n^m(θ, φ) = P̄_n^m(cos θ) e^{imφ}.
#[derive(Debug, Clone)]
pub(crate) struct AssocLegendre {
    degree: usize,
    values: Vec<f64>,
}

impl AssocLegendre {
    pub(crate) fn new(degree: usize, t: f64) -> Self {
        let t = t.clamp(-1.0, 1.0);
        let s = (1.0 - t * t).max(0.0).sqrt();
        let mut values = vec![0.0; tri(degree + 1, 0)];
        // P̄_m^m by the diagonal recurrence, starting from 1/√(4π).
        let mut pmm = 1.0 / (4.0 * PI).sqrt();
        for m in 0..=degree {
            if m > 0 {
                pmm *= -s * ((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
            }
            values[tri(m, m)] = pmm;
            if m < degree {
                values[tri(m + 1, m)] = t * ((2 * m + 3) as f64).sqrt() * pmm;
            }
            for n in (m + 2)..=degree {
                let (nf, mf) = (n as f64, m as f64);
                let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
                let b = (((nf - 1.0) * (nf - 1.0) - mf * mf) / (4.0 * (nf - 1.0) * (nf - 1.0) - 1.0)).sqrt();
                values[tri(n, m)] = a * (t * values[tri(n - 1, m)] - b * values[tri(n - 2, m)]);
            }
        }
        Self { degree, values }
    }

    /// P̄_n^m for m ≥ 0.
    pub(crate) fn get(&self, n: usize, m: usize) -> f64 {
        debug_assert!(m <= n && n <= self.degree);
        self.values[tri(n, m)]
    }

    /// The θ-factor of Y_n^k for any order, P̄_n^{−m} = (−1)^m P̄_n^m.
    pub(crate) fn signed(&self, n: usize, k: i64) -> f64 {
        let m = k.unsigned_abs() as usize;
        let v = self.get(n, m);
        if k < 0 && m % 2 == 1 {
            -v
        } else {
            v
        }
    }
}

fn tri(n: usize, m: usize) -> usize {
    n * (n + 1) / 2 + m
}

/// Y_n^k(ξ) for ξ ∈ S².
pub fn sph_harmonic(n: usize, k: i64, xi: &UnitVector) -> Result<Complex64> {
    if xi.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: xi.dim() });
    }
    if k.unsigned_abs() as usize > n {
        return Err(Error::invalid(format!("order {k} exceeds degree {n}")));
    }
    let c = xi.coords();
    let leg = AssocLegendre::new(n, c[2]);
    let phi = azimuth(c[0], c[1]);
    Ok(Complex64::from_polar(1.0, k as f64 * phi) * leg.signed(n, k))
}

/// Spherical-harmonic coefficients c_{n,k}, |k| ≤ n ≤ D, stored degree by
/// degree with k ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereCoeffs {
    degree: usize,
    data: Vec<Complex64>,
}

impl SphereCoeffs {
    pub fn zeros(degree: usize) -> Self {
        Self { degree, data: vec![Complex64::new(0.0, 0.0); (degree + 1) * (degree + 1)] }
    }

    pub fn from_vec(degree: usize, data: Vec<Complex64>) -> Result<Self> {
        let expected = (degree + 1) * (degree + 1);
        if data.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: data.len() });
        }
        Ok(Self { degree, data })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Storage position of (n, k).
    pub fn index(n: usize, k: i64) -> usize {
        debug_assert!(k.unsigned_abs() as usize <= n);
        offset(n, k)
    }

    pub fn get(&self, n: usize, k: i64) -> Complex64 {
        self.data[offset(n, k)]
    }

    pub fn set(&mut self, n: usize, k: i64, value: Complex64) {
        self.data[offset(n, k)] = value;
    }

    /// Coefficients of degree n, k = −n..=n.
    pub fn degree_slice(&self, n: usize) -> &[Complex64] {
        &self.data[n * n..(n + 1) * (n + 1)]
    }

    /// Σ |c|², which equals ‖f‖² on S².
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest deviation from the conjugate symmetry of real functions.
    pub fn real_symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for n in 0..=self.degree {
            for k in 0..=n as i64 {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let d = self.get(n, -k) - self.get(n, k).conj() * sign;
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// f(ξ) = Σ c_{n,k} Y_n^k(ξ).
    pub fn evaluate(&self, xi: &UnitVector) -> Result<Complex64> {
        if xi.dim() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: xi.dim() });
        }
        let c = xi.coords();
        Ok(self.evaluate_at(c[2], azimuth(c[0], c[1])))
    }

    pub(crate) fn evaluate_at(&self, cos_theta: f64, phi: f64) -> Complex64 {
        let leg = AssocLegendre::new(self.degree, cos_theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for k in -(self.degree as i64)..=self.degree as i64 {
            let mut s = Complex64::new(0.0, 0.0);
            for n in k.unsigned_abs() as usize..=self.degree {
                s += self.get(n, k) * leg.signed(n, k);
            }
            acc += s * Complex64::from_polar(1.0, k as f64 * phi);
        }
        acc
    }
}

fn offset(n: usize, k: i64) -> usize {
    (n * n + n).wrapping_add_signed(k as isize)
}

/// Coefficients of the real field `values` (grid storage order) up to degree D.
pub fn sht_forward(values: &[f64], grid: &SphereGrid, degree: usize) -> Result<SphereCoeffs> {
    if values.len() != grid.len() {
        return Err(Error::DimensionMismatch { expected: grid.len(), got: values.len() });
    }
    if !grid.supports_degree(degree) {
        return Err(Error::invalid(format!(
            "degree {degree} needs quadrature exactness {}, grid has {}",
            2 * degree,
            grid.exactness()
        )));
    }
    let np = grid.n_phi();
    let twiddle = azimuth_table(grid, degree);
    let mut out = SphereCoeffs::zeros(degree);
    for (i, ring) in values.chunks_exact(np).enumerate() {
        let leg = AssocLegendre::new(degree, grid.cos_thetas()[i]);
        let w = grid.ring_weight(i);
        for m in 0..=degree {
            // Σ_j f e^{−imφ_j}
            let row = &twiddle[m * np..(m + 1) * np];
            let mut f = Complex64::new(0.0, 0.0);
            for (v, e) in ring.iter().zip(row) {
                f += e.conj() * *v;
            }
            for n in m..=degree {
                let idx = offset(n, m as i64);
                out.data[idx] += f * (w * leg.get(n, m));
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

/// Real part of Σ c_{n,k} Y_n^k at every grid node.
pub fn sht_inverse(coeffs: &SphereCoeffs, grid: &SphereGrid) -> Vec<f64> {
    let degree = coeffs.degree;
    let np = grid.n_phi();
    let twiddle = azimuth_table(grid, degree);
    let mut out = vec![0.0; grid.len()];
    for (i, ring) in out.chunks_exact_mut(np).enumerate() {
        let leg = AssocLegendre::new(degree, grid.cos_thetas()[i]);
        for k in -(degree as i64)..=degree as i64 {
            let mut a = Complex64::new(0.0, 0.0);
            for n in k.unsigned_abs() as usize..=degree {
                a += coeffs.get(n, k) * leg.signed(n, k);
            }
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let m = k.unsigned_abs() as usize;
            let row = &twiddle[m * np..(m + 1) * np];
            for (v, e) in ring.iter_mut().zip(row) {
                let e = if k < 0 { e.conj() } else { *e };
                *v += (a * e).re;
            }
        }
    }
    out
}

/// e^{imφ_j} for m = 0..=D, row-major by m.
pub(crate) fn azimuth_table(grid: &SphereGrid, degree: usize) -> Vec<Complex64> {
    let mut t = Vec::with_capacity((degree + 1) * grid.n_phi());
    for m in 0..=degree {
        t.extend(grid.phis().iter().map(|p| Complex64::from_polar(1.0, m as f64 * p)));
    }
    t
}
