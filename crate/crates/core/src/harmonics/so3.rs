use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::gauss_legendre;
use super::wigner::{normalization, wigner_d_series};
use crate::error::{Error, Result};
use crate::manifold::{rotation_euler_zyz, Rotation};

/// Product quadrature on SO(3): uniform α and γ, Gauss–Legendre in cos β.
/// Nodes are stored β-major, then α, then γ. Weights sum to 8π².
#[derive(Debug, Clone, PartialEq)]
pub struct So3Grid {
    cos_betas: Vec<f64>,
    beta_weights: Vec<f64>,
    n_angle: usize,
}

impl So3Grid {
    pub fn new(n_beta: usize, n_angle: usize) -> Result<Self> {
        if n_beta == 0 || n_angle == 0 {
            return Err(Error::invalid("SO(3) grid needs at least one node per angle"));
        }
        let (cos_betas, w) = gauss_legendre(n_beta);
        let scale = (TAU / n_angle as f64).powi(2);
        Ok(Self { cos_betas, beta_weights: w.iter().map(|w| w * scale).collect(), n_angle })
    }

    /// Exact for products of Wigner functions up to degree D.
    pub fn for_degree(degree: usize) -> Self {
        Self::new(degree + 1, 2 * degree + 2).expect("nonempty grid")
    }

    pub fn exactness(&self) -> usize {
        (2 * self.cos_betas.len() - 1).min(self.n_angle - 1)
    }

    pub fn supports_degree(&self, degree: usize) -> bool {
        self.exactness() >= 2 * degree
    }

    pub fn len(&self) -> usize {
        self.cos_betas.len() * self.n_angle * self.n_angle
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn angle(&self, a: usize) -> f64 {
        TAU * a as f64 / self.n_angle as f64
    }

    /// Euler angles of every node in storage order.
    pub fn euler_angles(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for t in &self.cos_betas {
            for a in 0..self.n_angle {
                for g in 0..self.n_angle {
                    out.push((self.angle(a), t.acos(), self.angle(g)));
                }
            }
        }
        out
    }

    pub fn rotations(&self) -> Vec<Rotation> {
        self.euler_angles().into_iter().map(|(a, b, g)| rotation_euler_zyz(a, b, g)).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        let per = self.n_angle * self.n_angle;
        self.beta_weights.iter().flat_map(|w| std::iter::repeat_n(*w, per)).collect()
    }
}

/// Wigner coefficients c_n^{k,j}, |k|, |j| ≤ n ≤ D, of f = Σ c D̃_n^{k,j}.
/// Stored degree by degree, then k, then j, both ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct So3Coeffs {
    degree: usize,
    data: Vec<Complex64>,
}

fn degree_offset(n: usize) -> usize {
    (4 * n * n * n - n) / 3
}

fn offset(n: usize, k: i64, j: i64) -> usize {
    let w = 2 * n as i64 + 1;
    degree_offset(n) + ((k + n as i64) * w + j + n as i64) as usize
}

impl So3Coeffs {
    pub fn zeros(degree: usize) -> Self {
        Self { degree, data: vec![Complex64::new(0.0, 0.0); degree_offset(degree + 1)] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, n: usize, k: i64, j: i64) -> Complex64 {
        self.data[offset(n, k, j)]
    }

    pub fn set(&mut self, n: usize, k: i64, j: i64, value: Complex64) {
        self.data[offset(n, k, j)] = value;
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    /// f(Q) = Σ c_n^{k,j} D̃_n^{k,j}(Q).
    pub fn evaluate(&self, q: &Rotation) -> Complex64 {
        self.evaluate_weighted(q, |_| 1.0)
    }

    /// Band-limited Radon transform (T f)(Q, ω).
    pub fn radon(&self, q: &Rotation, omega: f64) -> Complex64 {
        self.evaluate_weighted(q, |n| so3_radon_eigenvalue(n, omega))
    }

    fn evaluate_weighted(&self, q: &Rotation, scale: impl Fn(usize) -> f64) -> Complex64 {
        let (alpha, beta, gamma) = q.to_euler_zyz();
        let t = beta.cos();
        let d = self.degree as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in -d..=d {
            for j in -d..=d {
                let series = wigner_d_series(self.degree, k, j, t);
                let lo = k.unsigned_abs().max(j.unsigned_abs()) as usize;
                let mut s = Complex64::new(0.0, 0.0);
                for (n, dn) in series.iter().enumerate().skip(lo) {
                    s += self.get(n, k, j) * (dn * normalization(n) * scale(n));
                }
                acc += s * Complex64::from_polar(1.0, -(k as f64 * alpha + j as f64 * gamma));
            }
        }
        acc
    }
}

/// Wigner coefficients of samples on an SO(3) grid, c = Σ w f conj(D̃).
pub fn so3_forward(values: &[Complex64], grid: &So3Grid, degree: usize) -> Result<So3Coeffs> {
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
    let na = grid.n_angle;
    let d = degree as i64;
    let width = 2 * degree + 1;
    // e^{imθ_a} for m = −D..=D
    let tw: Vec<Complex64> = (-d..=d)
        .flat_map(|m| (0..na).map(move |a| Complex64::from_polar(1.0, m as f64 * TAU * a as f64 / na as f64)))
        .collect();
    let mut out = So3Coeffs::zeros(degree);
    let mut h = vec![Complex64::new(0.0, 0.0); na * width];
    for (i, block) in values.chunks_exact(na * na).enumerate() {
        // h[a][j] = Σ_g f e^{ijγ_g}
        for (a, row) in block.chunks_exact(na).enumerate() {
            for jj in 0..width {
                let e = &tw[jj * na..(jj + 1) * na];
                h[a * width + jj] = row.iter().zip(e).map(|(f, e)| f * e).sum();
            }
        }
        let t = grid.cos_betas[i];
        let w = grid.beta_weights[i];
        for (kk, k) in (-d..=d).enumerate() {
            let e = &tw[kk * na..(kk + 1) * na];
            for (jj, j) in (-d..=d).enumerate() {
                let f: Complex64 = (0..na).map(|a| e[a] * h[a * width + jj]).sum();
                let series = wigner_d_series(degree, k, j, t);
                let lo = k.unsigned_abs().max(j.unsigned_abs()) as usize;
                for (n, dn) in series.iter().enumerate().skip(lo) {
                    out.data[offset(n, k, j)] += f * (w * dn * normalization(n));
                }
            }
        }
    }
    Ok(out)
}

/// Eigenvalue of the fixed-ω Radon transform on degree n,
/// (2/((2n+1)π)) sin((n+½)ω) sin(ω/2).
pub fn so3_radon_eigenvalue(n: usize, omega: f64) -> f64 {
    let nf = n as f64;
    2.0 / ((2.0 * nf + 1.0) * PI) * ((nf + 0.5) * omega).sin() * (omega / 2.0).sin()
}

/// Singular values of the Radon transform on L²(SO(3) × [0, π]).
pub fn so3_svd_singular_value(n: usize) -> f64 {
    if n == 0 {
        (1.5f64).sqrt() / PI.sqrt()
    } else {
        1.0 / ((2 * n + 1) as f64 * PI.sqrt())
    }
}

/// Real part of (T f)(Q, ω) for band-limited f.
pub fn so3_radon_forward_svd(coeffs: &So3Coeffs, q: &Rotation, omega: f64) -> f64 {
    coeffs.radon(q, omega).re
}

/// D̃ evaluated on a whole grid, used by tests and oracles.
#[cfg(test)]
pub(crate) fn sample_normalized(n: usize, k: i64, j: i64, grid: &So3Grid) -> Vec<Complex64> {
    use super::wigner::wigner_D_normalized;
    grid.rotations().iter().map(|r| wigner_D_normalized(n, k, j, r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::gauss_legendre;
    use crate::harmonics::wigner::wigner_D_normalized;
    use crate::manifold::sample_uniform_so3;
    use approx::assert_abs_diff_eq;

    #[test]
    fn grid_volume() {
        let g = So3Grid::for_degree(3);
        assert_abs_diff_eq!(g.weights().iter().sum::<f64>(), 8.0 * PI * PI, epsilon = 1e-10);
    }

    #[test]
    fn forward_recovers_single_functions() {
        let deg = 4;
        let g = So3Grid::for_degree(deg);
        for &(n, k, j) in &[(0usize, 0i64, 0i64), (1, 0, 0), (2, -1, 2), (4, 3, -4)] {
            let c = so3_forward(&sample_normalized(n, k, j, &g), &g, deg).unwrap();
            for m in 0..=deg {
                let mi = m as i64;
                for a in -mi..=mi {
                    for b in -mi..=mi {
                        let expect = if (m, a, b) == (n, k, j) { 1.0 } else { 0.0 };
                        assert!((c.get(m, a, b) - expect).norm() < 1e-10, "({m},{a},{b})");
                    }
                }
            }
        }
    }

    #[test]
    fn evaluate_round_trip() {
        let deg = 3;
        let g = So3Grid::for_degree(deg);
        let mut c = So3Coeffs::zeros(deg);
        c.set(2, 1, -1, Complex64::new(0.3, -0.2));
        c.set(3, 0, 2, Complex64::new(-1.1, 0.5));
        c.set(0, 0, 0, Complex64::new(0.7, 0.0));
        let vals: Vec<Complex64> = g.rotations().iter().map(|r| c.evaluate(r)).collect();
        let back = so3_forward(&vals, &g, deg).unwrap();
        for (a, b) in c.as_slice().iter().zip(back.as_slice()) {
            assert!((a - b).norm() < 1e-10);
        }
        let parseval: f64 = vals.iter().zip(g.weights()).map(|(v, w)| v.norm_sqr() * w).sum();
        assert_abs_diff_eq!(parseval, c.norm_sq(), epsilon = 1e-10);
    }

    #[test]
    fn singular_values() {
        assert_abs_diff_eq!(so3_svd_singular_value(0), 0.690988298942671, epsilon = 1e-12);
        assert_abs_diff_eq!(so3_svd_singular_value(1), 0.188063194515, epsilon = 1e-11);
        // ‖eigenvalue(n, ·)‖ on [0, π] reproduces the singular value.
        let (x, w) = gauss_legendre(60);
        for n in 0..10 {
            let sq: f64 = x
                .iter()
                .zip(&w)
                .map(|(t, w)| {
                    let om = PI * (t + 1.0) / 2.0;
                    w * PI / 2.0 * so3_radon_eigenvalue(n, om).powi(2)
                })
                .sum();
            assert_abs_diff_eq!(sq.sqrt(), so3_svd_singular_value(n), epsilon = 1e-12);
        }
    }

    #[test]
    fn fixed_angle_kernel() {
        for n in 0..8usize {
            for m in 1..4 {
                let om = m as f64 * PI / (n as f64 + 0.5);
                if om <= PI {
                    assert_abs_diff_eq!(so3_radon_eigenvalue(n, om), 0.0, epsilon = 1e-15);
                }
            }
        }
    }

    /// F_n^{k,j}(Q, ω) = D̃(Q) e_n(ω)/λ_n are orthonormal on SO(3) × [0, π].
    #[test]
    fn image_functions_are_orthonormal() {
        let deg = 6;
        let g = So3Grid::for_degree(deg + 1);
        let w = g.weights();
        let rots = g.rotations();
        let (x, wt) = gauss_legendre(24);
        let omegas: Vec<(f64, f64)> = x.iter().zip(&wt).map(|(t, w)| (PI * (t + 1.0) / 2.0, w * PI / 2.0)).collect();
        let labels: Vec<(usize, i64, i64)> =
            [(0, 0, 0), (1, 0, 0), (1, 1, -1), (2, 2, 0), (3, -1, 3), (5, 4, 4), (6, 0, -6), (6, 1, 2)].to_vec();
        let vals: Vec<Vec<Complex64>> =
            labels.iter().map(|&(n, k, j)| rots.iter().map(|r| wigner_D_normalized(n, k, j, r)).collect()).collect();
        for (a, &(n, ..)) in labels.iter().enumerate() {
            for (b, &(m, ..)) in labels.iter().enumerate() {
                let so3: Complex64 = vals[a].iter().zip(&vals[b]).zip(&w).map(|((p, q), w)| p * q.conj() * *w).sum();
                let om: f64 = omegas
                    .iter()
                    .map(|(o, w)| {
                        w * so3_radon_eigenvalue(n, *o) * so3_radon_eigenvalue(m, *o)
                            / (so3_svd_singular_value(n) * so3_svd_singular_value(m))
                    })
                    .sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((so3 * om - expect).norm() < 1e-6, "{a},{b}");
            }
        }
    }

    #[test]
    fn radon_of_constant() {
        let mut c = So3Coeffs::zeros(0);
        c.set(0, 0, 0, Complex64::new((8.0 * PI * PI).sqrt(), 0.0));
        let q = &sample_uniform_so3(1, 3)[0];
        for om in [0.0, 0.5, 2.0, PI] {
            assert_abs_diff_eq!(so3_radon_forward_svd(&c, q, om), (1.0 - f64::cos(om)) / PI, epsilon = 1e-14);
        }
    }
}
