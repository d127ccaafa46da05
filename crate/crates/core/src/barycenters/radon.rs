use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::check_lambda;
use crate::error::{Error, Result};
use crate::harmonics::{
    degree_fields, legendre_normalized_table, sht_forward, sht_inverse, slice_svd_pinv, slice_svd_singular_value,
    SphereCoeffs, SphereGrid, TGrid,
};
use crate::ot1d::{barycenter_density, Measure1D};
use crate::par::map_indexed;

/// Discretization of the Radon barycenter pipeline on S².
#[derive(Debug, Clone, PartialEq)]
pub struct RadonBarycenterConfig {
    /// Truncation degree D.
    pub degree: usize,
    /// Input and output grid; its nodes double as slicing directions.
    pub grid: SphereGrid,
    /// Nodes t_ℓ at which per-direction barycenters are sampled.
    pub t_grid: TGrid,
    /// Cells of the fine uniform grid on [−1, 1] that carries the slice
    /// densities into the one-dimensional barycenter.
    pub fine_cells: usize,
}

impl RadonBarycenterConfig {
    /// The smallest admissible grid for degree D, 2D + 2 Gauss–Legendre
    /// t-nodes and 4096 fine cells.
    pub fn new(degree: usize) -> Self {
        Self {
            degree,
            grid: SphereGrid::for_degree(degree),
            t_grid: TGrid::gauss_legendre(2 * degree + 2),
            fine_cells: 4096,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.grid.supports_degree(self.degree) {
            return Err(Error::invalid(format!(
                "degree {} needs grid exactness {}, grid has {}",
                self.degree,
                2 * self.degree,
                self.grid.exactness()
            )));
        }
        if self.t_grid.is_empty() || self.fine_cells < 2 {
            return Err(Error::invalid("t-grid and fine grid must be nonempty"));
        }
        Ok(())
    }
}

/// A Radon barycenter on the configuration grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadonBarycenter {
    /// Unit-mass density at the grid nodes, ring by ring.
    pub density: Vec<f64>,
    /// Coefficients before flooring.
    pub coeffs: SphereCoeffs,
    /// Mass removed by flooring the output at zero, relative to the kept mass.
    pub clipped_mass: f64,
    /// Largest relative mass removed by flooring a slice density.
    pub slice_clipped_mass: f64,
}

/// Radon barycenter of grid densities: per-direction one-dimensional
/// barycenters of the slice transforms, inverted by the pseudoinverse of the
/// truncated slice transform. Inputs are rescaled to unit mass.
pub fn barycenter_radon(inputs: &[Vec<f64>], lambda: &[f64], cfg: &RadonBarycenterConfig) -> Result<RadonBarycenter> {
    check_lambda(lambda, inputs.len())?;
    cfg.validate()?;
    let grid = &cfg.grid;
    let degree = cfg.degree;
    let coeffs = inputs
        .iter()
        .map(|f| {
            if f.len() != grid.len() {
                return Err(Error::DimensionMismatch { expected: grid.len(), got: f.len() });
            }
            if f.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::invalid("input densities must be finite and nonnegative"));
            }
            let mass = grid.integrate(f);
            if !(mass > 0.0) {
                return Err(Error::invalid("input density has no mass to normalize"));
            }
            let unit: Vec<f64> = f.iter().map(|v| v / mass).collect();
            sht_forward(&unit, grid, degree)
        })
        .collect::<Result<Vec<_>>>()?;
    let fields: Vec<Vec<Vec<f64>>> = coeffs.iter().map(|c| degree_fields(c, grid)).collect();

    // λ_n P̃_n(s) on the fine grid.
    let fine: Vec<f64> = (0..=cfg.fine_cells).map(|i| -1.0 + 2.0 * i as f64 / cfg.fine_cells as f64).collect();
    let basis: Vec<Vec<f64>> = fine
        .iter()
        .map(|s| {
            let p = legendre_normalized_table(degree, 3, *s);
            (0..=degree).map(|n| slice_svd_singular_value(n, 3) * p[n]).collect()
        })
        .collect();
    // A unit-mass density slices to mass 1/(4π) in t.
    let slice_mass = 1.0 / (4.0 * PI);

    let per_direction = map_indexed(grid.len(), |p| -> Result<(Vec<f64>, f64)> {
        let mut clipped: f64 = 0.0;
        let measures = fields
            .iter()
            .map(|f| {
                let values: Vec<f64> = basis.iter().map(|b| (0..=degree).map(|n| b[n] * f[n][p]).sum()).collect();
                let m = Measure1D::grid_density(&fine, &values)?;
                clipped = clipped.max(m.clipped_mass());
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?;
        let bary = barycenter_density(&measures, lambda, cfg.t_grid.nodes())?;
        Ok((bary.into_iter().map(|v| v * slice_mass).collect(), clipped))
    });
    let mut g = Vec::with_capacity(grid.len() * cfg.t_grid.len());
    let mut slice_clipped_mass: f64 = 0.0;
    for r in per_direction {
        let (row, clipped) = r?;
        g.extend(row);
        slice_clipped_mass = slice_clipped_mass.max(clipped);
    }

    let coeffs = slice_svd_pinv(&g, grid, &cfg.t_grid, degree)?;
    let raw = sht_inverse(&coeffs, grid);
    let negative: Vec<f64> = raw.iter().map(|v| (-v).max(0.0)).collect();
    let mut density: Vec<f64> = raw.iter().map(|v| v.max(0.0)).collect();
    let kept = grid.integrate(&density);
    if !(kept > 0.0) {
        return Err(Error::numeric("barycenter density has no positive mass"));
    }
    density.iter_mut().for_each(|v| *v /= kept);
    Ok(RadonBarycenter { density, coeffs, clipped_mass: grid.integrate(&negative) / kept, slice_clipped_mass })
}
