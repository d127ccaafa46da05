//! File schemas.
//!
//! - Measure file: `{"manifold": "sphere" | "so3", "dim": d, "points": [[…], …],
//!   "weights": […]}`. Rotations are row-major 3×3 matrices (9 numbers) and
//!   have `dim` 3. `weights` may be omitted for uniform weights.
//! - Grid density: `{"thetas": […], "phis": […], "values": […]}` with values
//!   row-major (ring by ring) on the Gauss–Legendre ring grid.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::SphereGrid;
use crate::manifold::{Rotation, UnitVector};
use crate::slicing::{So3Measure, SphereMeasure};

/// Node positions of a stored grid must match the rebuilt grid this closely.
const GRID_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ManifoldKind {
    Sphere,
    So3,
}

/// A measure on either manifold.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMeasure {
    Sphere(SphereMeasure),
    So3(So3Measure),
}

impl AnyMeasure {
    pub fn kind(&self) -> ManifoldKind {
        match self {
            AnyMeasure::Sphere(_) => ManifoldKind::Sphere,
            AnyMeasure::So3(_) => ManifoldKind::So3,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyMeasure::Sphere(m) => m.len(),
            AnyMeasure::So3(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyMeasure::Sphere(m) => m.dim(),
            AnyMeasure::So3(_) => 3,
        }
    }
}

/// The on-disk form of a measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    pub manifold: ManifoldKind,
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl MeasureFile {
    pub fn to_measure(&self) -> Result<AnyMeasure> {
        let weights = |n: usize| self.weights.clone().unwrap_or_else(|| vec![1.0 / n as f64; n]);
        let expected = match self.manifold {
            ManifoldKind::Sphere => self.dim,
            ManifoldKind::So3 => {
                if self.dim != 3 {
                    return Err(Error::DimensionMismatch { expected: 3, got: self.dim });
                }
                9
            }
        };
        if let Some(bad) = self.points.iter().find(|p| p.len() != expected) {
            return Err(Error::DimensionMismatch { expected, got: bad.len() });
        }
        let n = self.points.len();
        Ok(match self.manifold {
            ManifoldKind::Sphere => {
                let points = self.points.iter().map(|p| UnitVector::new(p.clone())).collect::<Result<Vec<_>>>()?;
                AnyMeasure::Sphere(SphereMeasure::new(points, weights(n))?)
            }
            ManifoldKind::So3 => {
                let points = self
                    .points
                    .iter()
                    .map(|p| Rotation::from_row_major(p.as_slice().try_into().expect("length checked")))
                    .collect::<Result<Vec<_>>>()?;
                AnyMeasure::So3(So3Measure::new(points, weights(n))?)
            }
        })
    }
}

impl From<&SphereMeasure> for MeasureFile {
    fn from(m: &SphereMeasure) -> Self {
        Self {
            manifold: ManifoldKind::Sphere,
            dim: m.dim(),
            points: m.points().iter().map(|x| x.coords().to_vec()).collect(),
            weights: Some(m.weights().to_vec()),
        }
    }
}

impl From<&So3Measure> for MeasureFile {
    fn from(m: &So3Measure) -> Self {
        Self {
            manifold: ManifoldKind::So3,
            dim: 3,
            points: m.points().iter().map(|r| r.to_row_major().to_vec()).collect(),
            weights: Some(m.weights().to_vec()),
        }
    }
}

impl From<&AnyMeasure> for MeasureFile {
    fn from(m: &AnyMeasure) -> Self {
        match m {
            AnyMeasure::Sphere(m) => m.into(),
            AnyMeasure::So3(m) => m.into(),
        }
    }
}

/// A density sampled on a Gauss–Legendre ring grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDensityFile {
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    pub values: Vec<f64>,
}

impl GridDensityFile {
    pub fn new(grid: &SphereGrid, values: &[f64]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: values.len() });
        }
        Ok(Self { thetas: grid.thetas().to_vec(), phis: grid.phis().to_vec(), values: values.to_vec() })
    }

    /// Rebuilds the grid and checks that the stored nodes are its nodes.
    pub fn grid(&self) -> Result<SphereGrid> {
        let grid = SphereGrid::new(self.thetas.len(), self.phis.len())?;
        let matches = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= GRID_TOL);
        if !matches(&self.thetas, grid.thetas()) || !matches(&self.phis, grid.phis()) {
            return Err(Error::invalid("grid nodes are not the Gauss–Legendre ring grid of this size"));
        }
        if self.values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: self.values.len() });
        }
        Ok(grid)
    }
}

/// Parses JSON from a file, reporting failures as invalid input.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::invalid(format!("reading {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::invalid(format!("parsing {}: {e}", path.display())))
}

/// Writes pretty-printed JSON, creating parent directories.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::invalid(format!("creating {}: {e}", dir.display())))?;
    }
    let text = serde_json::to_string_pretty(value).expect("schema types serialize");
    fs::write(path, text + "\n").map_err(|e| Error::invalid(format!("writing {}: {e}", path.display())))
}

pub fn read_measure(path: &Path) -> Result<AnyMeasure> {
    read_json::<MeasureFile>(path)?.to_measure()
}

pub fn write_measure(path: &Path, m: &AnyMeasure) -> Result<()> {
    write_json(path, &MeasureFile::from(m))
}
