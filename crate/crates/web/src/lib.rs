//! Browser demo: sample two shapes on S², compare them with parallel and
//! semicircular sliced distances, and average them with the free-support
//! and Radon barycenters.
//!
//! Point clouds cross the boundary as flat `[x0, y0, z0, x1, ...]` arrays
//! and grid densities ring by ring (north to south). The plain functions
//! are usable and testable without a browser; the `wasm_bindgen` wrappers
//! only convert errors.

use slicedot::barycenters::{barycenter_free_sphere, barycenter_radon, RadonBarycenterConfig, SgdConfig, StepSchedule};
use slicedot::datasets::{kde_vmf, shape_measure_rotated, Shape};
use slicedot::distances::{psw, ssw, SliceBudget};
use slicedot::manifold::{rotation_axis_angle, sample_uniform_sphere, UnitVector};
use slicedot::slicing::SphereMeasure;
use wasm_bindgen::prelude::*;

/// Largest point count and degree the page may request; keeps a click
/// responsive on one thread.
pub const MAX_POINTS: usize = 5000;
pub const MAX_DEGREE: usize = 48;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn measure_from_flat(flat: &[f64]) -> Result<SphereMeasure, String> {
    if flat.is_empty() || flat.len() % 3 != 0 {
        return Err(format!("expected a nonempty list of 3D points, got {} numbers", flat.len()));
    }
    let points = flat.chunks_exact(3).map(|c| UnitVector::normalize(c.to_vec())).collect::<Result<Vec<_>, _>>().map_err(err)?;
    SphereMeasure::uniform(points).map_err(err)
}

fn check_points(n: usize) -> Result<(), String> {
    if n == 0 || n > MAX_POINTS {
        return Err(format!("point count must be between 1 and {MAX_POINTS}"));
    }
    Ok(())
}

/// `n` samples of a named shape (or `uniform`), tilted by `tilt` radians
/// about the first axis.
pub fn sample(shape: &str, n: usize, seed: u32, tilt: f64) -> Result<Vec<f64>, String> {
    check_points(n)?;
    let q = rotation_axis_angle(&UnitVector::basis(3, 0), tilt).map_err(err)?;
    let m = if shape == "uniform" {
        SphereMeasure::uniform(sample_uniform_sphere(3, n, seed.into()).map_err(err)?).map_err(err)?
    } else {
        let shape: Shape = shape.parse().map_err(err)?;
        shape_measure_rotated(shape, n, seed.into(), &q).map_err(err)?
    };
    Ok(m.flat_coords())
}

/// `[PSW₂, its stderr, SSW₂, its stderr]`; the errors are those of the
/// squared distances.
pub fn distances(a: &[f64], b: &[f64], slices: usize, seed: u32) -> Result<Vec<f64>, String> {
    let (mu, nu) = (measure_from_flat(a)?, measure_from_flat(b)?);
    let budget = SliceBudget::new(slices, seed.into(), 2.0).map_err(err)?;
    let p = psw(&mu, &nu, &budget).map_err(err)?;
    let s = ssw(&mu, &nu, &budget).map_err(err)?;
    Ok(vec![p.value, p.stderr, s.value, s.stderr])
}

/// Free-support barycenter points and loss trace.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct FreeRun {
    points: Vec<f64>,
    loss: Vec<f64>,
}

#[wasm_bindgen]
impl FreeRun {
    #[wasm_bindgen(getter)]
    pub fn points(&self) -> Vec<f64> {
        self.points.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn loss(&self) -> Vec<f64> {
        self.loss.clone()
    }
}

/// Barycenter of `a` and `b` with weights (1 − t, t), starting from a
/// uniform cloud of `n` points.
#[allow(clippy::too_many_arguments)]
pub fn free_barycenter(
    a: &[f64],
    b: &[f64],
    t: f64,
    n: usize,
    iterations: usize,
    slices: usize,
    tau: f64,
    seed: u32,
) -> Result<FreeRun, String> {
    check_points(n)?;
    if !(0.0..=1.0).contains(&t) {
        return Err("interpolation weight must lie in [0, 1]".into());
    }
    let inputs = [measure_from_flat(a)?, measure_from_flat(b)?];
    let init = SphereMeasure::uniform(sample_uniform_sphere(3, n, u64::from(seed) + 1).map_err(err)?).map_err(err)?;
    let cfg = SgdConfig::new(iterations, slices, StepSchedule::Constant { tau }, seed.into()).map_err(err)?;
    let run = barycenter_free_sphere(&inputs, &[1.0 - t, t], &init, &cfg).map_err(err)?;
    Ok(FreeRun { points: run.measure.flat_coords(), loss: run.loss })
}

/// Kernel density estimates of both inputs and their Radon barycenter on
/// a grid of `n_theta` rings with `n_phi` points each.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct RadonRun {
    n_theta: usize,
    n_phi: usize,
    first: Vec<f64>,
    second: Vec<f64>,
    barycenter: Vec<f64>,
}

#[wasm_bindgen]
impl RadonRun {
    #[wasm_bindgen(getter)]
    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    #[wasm_bindgen(getter)]
    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    #[wasm_bindgen(getter)]
    pub fn first(&self) -> Vec<f64> {
        self.first.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn second(&self) -> Vec<f64> {
        self.second.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn barycenter(&self) -> Vec<f64> {
        self.barycenter.clone()
    }
}

/// Radon barycenter with weights (1 − t, t) of vMF kernel density
/// estimates (concentration `kappa`) of `a` and `b`.
pub fn radon_barycenter(a: &[f64], b: &[f64], t: f64, degree: usize, kappa: f64) -> Result<RadonRun, String> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(format!("degree must be between 1 and {MAX_DEGREE}"));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err("interpolation weight must lie in [0, 1]".into());
    }
    let cfg = RadonBarycenterConfig::new(degree);
    let first = kde_vmf(&measure_from_flat(a)?, kappa, &cfg.grid).map_err(err)?;
    let second = kde_vmf(&measure_from_flat(b)?, kappa, &cfg.grid).map_err(err)?;
    let out = barycenter_radon(&[first.clone(), second.clone()], &[1.0 - t, t], &cfg).map_err(err)?;
    Ok(RadonRun { n_theta: cfg.grid.n_theta(), n_phi: cfg.grid.n_phi(), first, second, barycenter: out.density })
}

#[wasm_bindgen(js_name = sample)]
pub fn sample_js(shape: &str, n: usize, seed: u32, tilt: f64) -> Result<Vec<f64>, JsError> {
    sample(shape, n, seed, tilt).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = distances)]
pub fn distances_js(a: &[f64], b: &[f64], slices: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    distances(a, b, slices, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = freeBarycenter)]
#[allow(clippy::too_many_arguments)]
pub fn free_barycenter_js(
    a: &[f64],
    b: &[f64],
    t: f64,
    n: usize,
    iterations: usize,
    slices: usize,
    tau: f64,
    seed: u32,
) -> Result<FreeRun, JsError> {
    free_barycenter(a, b, t, n, iterations, slices, tau, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = radonBarycenter)]
pub fn radon_barycenter_js(a: &[f64], b: &[f64], t: f64, degree: usize, kappa: f64) -> Result<RadonRun, JsError> {
    radon_barycenter(a, b, t, degree, kappa).map_err(|e| JsError::new(&e))
}
