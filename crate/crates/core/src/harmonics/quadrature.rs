use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Gauss–Legendre nodes (ascending) and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_and_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (z * p1 - p0) / (z * z - 1.0))
}

/// A product quadrature on S²: Gauss–Legendre in cos θ times a uniform
/// azimuthal rule. Points are stored ring by ring (θ-major).
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    thetas: Vec<f64>,
    cos_thetas: Vec<f64>,
    ring_weights: Vec<f64>,
    phis: Vec<f64>,
}

impl SphereGrid {
    /// `n_theta` Gauss–Legendre rings and `n_phi` azimuths per ring.
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(Error::invalid("sphere grid needs at least one ring and one azimuth"));
        }
        let (t, w) = gauss_legendre(n_theta);
        // Rings from the north pole down: θ ascending means cos θ descending.
        let cos_thetas: Vec<f64> = t.iter().rev().copied().collect();
        let ring_weights: Vec<f64> = w.iter().rev().map(|w| w * TAU / n_phi as f64).collect();
        let thetas = cos_thetas.iter().map(|c| c.acos()).collect();
        let phis = (0..n_phi).map(|j| TAU * j as f64 / n_phi as f64).collect();
        Ok(Self { thetas, cos_thetas, ring_weights, phis })
    }

    /// The smallest grid integrating spherical polynomials of degree 2D exactly.
    pub fn for_degree(degree: usize) -> Self {
        Self::new(degree + 1, 2 * degree + 2).expect("nonempty grid")
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exactness(&self) -> usize {
        (2 * self.thetas.len() - 1).min(self.phis.len() - 1)
    }

    /// Whether products of degree-`degree` harmonics are integrated exactly.
    pub fn supports_degree(&self, degree: usize) -> bool {
        self.exactness() >= 2 * degree
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn cos_thetas(&self) -> &[f64] {
        &self.cos_thetas
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn n_theta(&self) -> usize {
        self.thetas.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phis.len()
    }

    pub fn len(&self) -> usize {
        self.thetas.len() * self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weight shared by all points of ring `i`.
    pub fn ring_weight(&self, i: usize) -> f64 {
        self.ring_weights[i]
    }

    /// Weights of all points in storage order; they sum to 4π.
    pub fn weights(&self) -> Vec<f64> {
        self.ring_weights.iter().flat_map(|w| std::iter::repeat_n(*w, self.phis.len())).collect()
    }

    /// Cartesian coordinates of point (ring `i`, azimuth `j`).
    pub fn point(&self, i: usize, j: usize) -> [f64; 3] {
        let (st, ct) = (self.thetas[i].sin(), self.cos_thetas[i]);
        let (sp, cp) = self.phis[j].sin_cos();
        [cp * st, sp * st, ct]
    }

    /// All points in storage order.
    pub fn points(&self) -> Vec<[f64; 3]> {
        (0..self.n_theta()).flat_map(|i| (0..self.n_phi()).map(move |j| (i, j))).map(|(i, j)| self.point(i, j)).collect()
    }

    /// Σ w f over the grid.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        let k = self.n_phi();
        values.chunks_exact(k).zip(&self.ring_weights).map(|(ring, w)| w * ring.iter().sum::<f64>()).sum()
    }
}

/// A quadrature rule on the slice interval [−1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct TGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl TGrid {
    /// L Gauss–Legendre nodes; exact for polynomials of degree 2L − 1.
    pub fn gauss_legendre(l: usize) -> Self {
        let (nodes, weights) = gauss_legendre(l);
        Self { nodes, weights }
    }

    /// L midpoints with weight 2/L each.
    pub fn uniform_midpoints(l: usize) -> Self {
        let h = 2.0 / l as f64;
        Self { nodes: (0..l).map(|i| -1.0 + h * (i as f64 + 0.5)).collect(), weights: vec![h; l] }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}
