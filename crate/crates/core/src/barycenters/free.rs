use nalgebra::{DMatrix, Matrix3};
use serde::{Deserialize, Serialize};

use super::{check_lambda, SgdConfig};
use crate::error::{Error, Result};
use crate::manifold::{
    dot, exp_skew, exp_sphere_in_place, reorthonormalize, sample_one_so3, sample_one_sphere, Rotation, UnitVector,
};
use crate::ot1d::CircleSolver;
use crate::par::map_indexed;
use crate::rng::Rng;
use crate::slicing::{DiscreteMeasure, ManifoldPoint, SemicircleFrame, SliceDirection, SliceKind, So3Measure, SphereMeasure};

/// Rotation iterates are pulled back onto SO(3) at this period.
const REORTHONORMALIZE_EVERY: usize = 100;

/// Output of a free-support run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeSupportResult<P> {
    pub measure: DiscreteMeasure<P>,
    /// Σ λ_i SW₂²(X^l, μ_i) estimated before each step.
    pub loss: Vec<f64>,
    /// Steps in which two iterate points had equal slice values.
    pub tie_steps: usize,
}

/// SW₂² between two clouds for fixed directions, with its Riemannian
/// gradient in the first argument.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeGradient {
    /// Mean over directions of the one-dimensional W₂².
    pub value: f64,
    /// One tangent vector per point, in ambient coordinates (rotations
    /// row-major).
    pub tangents: Vec<Vec<f64>>,
    /// Some slice had tied values in X; ties were broken by index.
    pub ties: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(super) enum Geometry {
    Sphere(usize),
    So3,
}

impl Geometry {
    pub(super) fn width(self) -> usize {
        match self {
            Geometry::Sphere(d) => d,
            Geometry::So3 => 9,
        }
    }

    /// Replaces the Euclidean gradient `g` at `x` by its tangent projection.
    fn project(self, x: &[f64], g: &mut [f64]) {
        match self {
            Geometry::Sphere(_) => {
                let a = dot(x, g);
                g.iter_mut().zip(x).for_each(|(gi, xi)| *gi -= a * xi);
            }
            Geometry::So3 => {
                let (r, a) = (Matrix3::from_row_slice(x), Matrix3::from_row_slice(g));
                write_row_major(&((a - r * a.transpose() * r) * 0.5), g);
            }
        }
    }

    /// x ← exp_x(−τ v).
    fn descend(self, x: &mut [f64], v: &[f64], tau: f64) {
        match self {
            Geometry::Sphere(_) => {
                let step: Vec<f64> = v.iter().map(|vi| -tau * vi).collect();
                exp_sphere_in_place(x, &step);
            }
            Geometry::So3 => {
                let r = Matrix3::from_row_slice(x);
                let s = r.transpose() * Matrix3::from_row_slice(v) * (-tau);
                let s = (s - s.transpose()) * 0.5;
                write_row_major(&(r * exp_skew(&s)), x);
            }
        }
    }

    fn repair(self, x: &mut [f64]) {
        if self == Geometry::So3 {
            write_row_major(&reorthonormalize(&Matrix3::from_row_slice(x)), x);
        }
    }

    /// `count` uniform directions, row-major.
    pub(super) fn sample_directions(self, count: usize, rng: &mut Rng) -> Vec<f64> {
        match self {
            Geometry::Sphere(d) => (0..count).flat_map(|_| sample_one_sphere(d, rng).into_coords()).collect(),
            Geometry::So3 => (0..count).flat_map(|_| sample_one_so3(rng).to_row_major()).collect(),
        }
    }
}

fn write_row_major(m: &Matrix3<f64>, out: &mut [f64]) {
    for i in 0..3 {
        for j in 0..3 {
            out[3 * i + j] = m[(i, j)];
        }
    }
}

/// Points as a row-major buffer plus weights.
#[derive(Debug, Clone)]
struct Cloud {
    flat: Vec<f64>,
    weights: Vec<f64>,
}

impl Cloud {
    fn from_measure<P: ManifoldPoint>(m: &DiscreteMeasure<P>) -> Self {
        Self { flat: m.points().iter().flat_map(|p| p.ambient_coords()).collect(), weights: m.weights().to_vec() }
    }

    fn len(&self) -> usize {
        self.weights.len()
    }
}

struct Eval {
    loss: f64,
    /// Euclidean gradient, row-major N × width; empty when not requested.
    grad: Vec<f64>,
    ties: bool,
}

/// Indices sorted by (value, index).
pub(super) fn argsort(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|a, b| v[*a].total_cmp(&v[*b]).then(a.cmp(b)));
    idx
}

fn has_ties(v: &[f64], order: &[usize]) -> bool {
    order.windows(2).any(|w| v[w[0]] == v[w[1]])
}

/// Monotone (north-west corner) plan between two sorted weighted samples;
/// calls `visit(k, mass, x_k − y_s)` for every block and returns Σ mass·diff².
fn sweep(
    xs: &[f64],
    ox: &[usize],
    xw: &[f64],
    ys: &[f64],
    oy: &[usize],
    yw: &[f64],
    mut visit: impl FnMut(usize, f64, f64),
) -> f64 {
    let (nx, ny) = (ox.len(), oy.len());
    let cum = |c: f64, i: usize, n: usize| if i + 1 == n { 1.0 } else { c };
    let (mut i, mut j) = (0, 0);
    let (mut sx, mut sy) = (xw[ox[0]], yw[oy[0]]);
    let (mut cx, mut cy) = (cum(sx, 0, nx), cum(sy, 0, ny));
    let (mut r, mut acc) = (0.0, 0.0);
    loop {
        let end = cx.min(cy);
        if end > r {
            let (k, s) = (ox[i], oy[j]);
            let diff = xs[k] - ys[s];
            let mass = end - r;
            acc += mass * diff * diff;
            visit(k, mass, diff);
            r = end;
        }
        let (last_x, last_y) = (i + 1 == nx, j + 1 == ny);
        if last_x && last_y {
            return acc;
        }
        if cx <= end && !last_x {
            i += 1;
            sx += xw[ox[i]];
            cx = cum(sx, i, nx);
        }
        if cy <= end && !last_y {
            j += 1;
            sy += yw[oy[j]];
            cy = cum(sy, j, ny);
        }
    }
}

/// Σ_i λ_i · mean_q W₂²(slice_q X, slice_q Y_i) and its Euclidean gradient
/// for directions `dirs` (row-major, `count` rows).
#[allow(clippy::too_many_arguments)]
fn evaluate(
    geom: Geometry,
    kind: SliceKind,
    x: &Cloud,
    targets: &[Cloud],
    lambda: &[f64],
    dirs: &[f64],
    count: usize,
    want_grad: bool,
) -> Eval {
    if kind == SliceKind::Semicircular {
        return evaluate_semicircular(x, targets, lambda, dirs, count, want_grad);
    }
    let (w, n) = (geom.width(), x.len());
    let d = DMatrix::from_column_slice(w, count, dirs);
    let xp = DMatrix::from_row_slice(n, w, &x.flat) * &d;
    let yps: Vec<DMatrix<f64>> =
        targets.iter().map(|t| DMatrix::from_row_slice(t.len(), w, &t.flat) * &d).collect();
    let per_slice = map_indexed(count, |q| {
        let xs = &xp.as_slice()[q * n..(q + 1) * n];
        let ox = argsort(xs);
        let mut coef = vec![0.0; if want_grad { n } else { 0 }];
        let mut loss = 0.0;
        for ((t, yp), lam) in targets.iter().zip(&yps).zip(lambda) {
            let m = t.len();
            let ys = &yp.as_slice()[q * m..(q + 1) * m];
            let oy = argsort(ys);
            loss += lam
                * sweep(xs, &ox, &x.weights, ys, &oy, &t.weights, |k, mass, diff| {
                    if want_grad {
                        coef[k] += 2.0 * lam * mass * diff;
                    }
                });
        }
        (loss, coef, has_ties(xs, &ox))
    });
    let loss = crate::par::pairwise_sum(&per_slice.iter().map(|s| s.0).collect::<Vec<_>>()) / count as f64;
    let ties = per_slice.iter().any(|s| s.2);
    let grad = if want_grad {
        let c: Vec<f64> = per_slice.into_iter().flat_map(|s| s.1).collect();
        let g = DMatrix::from_column_slice(n, count, &c) * d.transpose() / count as f64;
        (0..n).flat_map(|k| (0..w).map(move |j| (k, j))).map(|(k, j)| g[(k, j)]).collect()
    } else {
        Vec::new()
    };
    Eval { loss, grad, ties }
}

fn sorted_with_cumulative(values: &[f64], weights: &[f64]) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    let order = argsort(values);
    let sorted = order.iter().map(|k| values[*k]).collect();
    let mut acc = 0.0;
    let mut cum: Vec<f64> = order
        .iter()
        .map(|k| {
            acc += weights[*k];
            acc
        })
        .collect();
    *cum.last_mut().expect("nonempty cloud") = 1.0;
    (order, sorted, cum)
}

fn evaluate_semicircular(
    x: &Cloud,
    targets: &[Cloud],
    lambda: &[f64],
    dirs: &[f64],
    count: usize,
    want_grad: bool,
) -> Eval {
    let n = x.len();
    let per_slice = map_indexed(count, |q| {
        let psi = UnitVector::from_raw(dirs[3 * q..3 * q + 3].to_vec());
        let frame = SemicircleFrame::new(&psi).expect("three-dimensional direction");
        let ax: Vec<f64> = x.flat.chunks_exact(3).map(|p| frame.angle(p).angle).collect();
        let (ox, xs, xc) = sorted_with_cumulative(&ax, &x.weights);
        let mut solver = CircleSolver::default();
        let mut coef = vec![0.0; if want_grad { n } else { 0 }];
        let mut g = vec![0.0; coef.len()];
        let mut loss = 0.0;
        for (t, lam) in targets.iter().zip(lambda) {
            let ay: Vec<f64> = t.flat.chunks_exact(3).map(|p| frame.angle(p).angle).collect();
            let (_, ys, yc) = sorted_with_cumulative(&ay, &t.weights);
            let (cost, shift) = solver.solve(&xs, &xc, &ys, &yc, 2.0);
            loss += lam * cost;
            if want_grad {
                g.iter_mut().for_each(|v| *v = 0.0);
                solver.cost_at(&xs, &xc, &ys, &yc, shift, 2.0, Some(&mut g));
                coef.iter_mut().zip(&g).for_each(|(c, gi)| *c += lam * gi);
            }
        }
        let mut out = vec![0.0; if want_grad { 3 * n } else { 0 }];
        if want_grad {
            for (pos, k) in ox.iter().enumerate() {
                let ga = frame.angle_gradient(&x.flat[3 * k..3 * k + 3]);
                for c in 0..3 {
                    out[3 * k + c] = coef[pos] * ga[c];
                }
            }
        }
        (loss, out, has_ties(&ax, &ox))
    });
    let loss = crate::par::pairwise_sum(&per_slice.iter().map(|s| s.0).collect::<Vec<_>>()) / count as f64;
    let ties = per_slice.iter().any(|s| s.2);
    let mut grad = vec![0.0; if want_grad { 3 * n } else { 0 }];
    for s in &per_slice {
        grad.iter_mut().zip(&s.1).for_each(|(a, b)| *a += b);
    }
    grad.iter_mut().for_each(|v| *v /= count as f64);
    Eval { loss, grad, ties }
}

pub(super) fn geometry_for<P: ManifoldPoint>(probe: &P, kind: SliceKind) -> Result<Geometry> {
    match (P::LINEAR_KIND, kind) {
        (SliceKind::Parallel, SliceKind::Parallel) => Ok(Geometry::Sphere(probe.ambient_dim())),
        (SliceKind::Parallel, SliceKind::Semicircular) if probe.ambient_dim() == 3 => Ok(Geometry::Sphere(3)),
        (SliceKind::Parallel, SliceKind::Semicircular) => {
            Err(Error::DimensionMismatch { expected: 3, got: probe.ambient_dim() })
        }
        (SliceKind::So3Trace, SliceKind::So3Trace) => Ok(Geometry::So3),
        _ => Err(Error::invalid(format!("free-support gradients are not available for {kind:?} slicing of these points"))),
    }
}

fn check_same_dim<P: ManifoldPoint>(a: &DiscreteMeasure<P>, b: &DiscreteMeasure<P>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(())
}

/// SW₂²(X, Y) for the given directions and its Riemannian gradient with
/// respect to the points of X. Both measures may have different sizes and
/// weights; the per-slice plan is the monotone one.
pub fn sw_gradient_free<P: ManifoldPoint>(
    x: &DiscreteMeasure<P>,
    y: &DiscreteMeasure<P>,
    directions: &[SliceDirection],
    kind: SliceKind,
) -> Result<FreeGradient> {
    check_same_dim(x, y)?;
    if directions.is_empty() {
        return Err(Error::invalid("at least one direction is required"));
    }
    let geom = geometry_for(&x.points()[0], kind)?;
    let mut dirs = Vec::with_capacity(directions.len() * geom.width());
    for d in directions {
        match (d, geom) {
            (SliceDirection::Sphere(psi), Geometry::Sphere(dim)) if psi.dim() == dim => {
                dirs.extend_from_slice(psi.coords())
            }
            (SliceDirection::So3(r), Geometry::So3) => dirs.extend_from_slice(&r.to_row_major()),
            _ => return Err(Error::invalid("direction does not match the measure's geometry")),
        }
    }
    let xc = Cloud::from_measure(x);
    let ev = evaluate(geom, kind, &xc, &[Cloud::from_measure(y)], &[1.0], &dirs, directions.len(), true);
    let w = geom.width();
    let tangents = xc
        .flat
        .chunks_exact(w)
        .zip(ev.grad.chunks_exact(w))
        .map(|(p, g)| {
            let mut g = g.to_vec();
            geom.project(p, &mut g);
            g
        })
        .collect();
    Ok(FreeGradient { value: ev.loss, tangents, ties: ev.ties })
}

/// The SGD loop on flat buffers; returns the final cloud, the loss trace and
/// the number of steps with ties.
fn run_sgd(
    geom: Geometry,
    kind: SliceKind,
    targets: &[Cloud],
    lambda: &[f64],
    mut x: Cloud,
    cfg: &SgdConfig,
) -> (Cloud, Vec<f64>, usize) {
    let w = geom.width();
    let mut loss = Vec::with_capacity(cfg.iterations);
    let mut tie_steps = 0;
    for l in 0..cfg.iterations {
        let dirs = geom.sample_directions(cfg.slices, &mut cfg.step_stream(l));
        let ev = evaluate(geom, kind, &x, targets, lambda, &dirs, cfg.slices, true);
        loss.push(if cfg.eval_separate {
            let eval_dirs = geom.sample_directions(cfg.slices, &mut cfg.eval_stream(l));
            evaluate(geom, kind, &x, targets, lambda, &eval_dirs, cfg.slices, false).loss
        } else {
            ev.loss
        });
        tie_steps += usize::from(ev.ties);
        let tau = cfg.schedule.tau(l);
        let mut grad = ev.grad;
        for (p, g) in x.flat.chunks_exact_mut(w).zip(grad.chunks_exact_mut(w)) {
            geom.project(p, g);
            geom.descend(p, g, tau);
        }
        if (l + 1) % REORTHONORMALIZE_EVERY == 0 {
            x.flat.chunks_exact_mut(w).for_each(|p| geom.repair(p));
        }
    }
    if geom == Geometry::So3 {
        x.flat.chunks_exact_mut(w).for_each(|p| geom.repair(p));
    }
    (x, loss, tie_steps)
}

fn prepare<P: ManifoldPoint>(
    inputs: &[DiscreteMeasure<P>],
    lambda: &[f64],
    init: &DiscreteMeasure<P>,
    cfg: &SgdConfig,
    kind: SliceKind,
) -> Result<(Geometry, Vec<Cloud>)> {
    check_lambda(lambda, inputs.len())?;
    cfg.validate()?;
    for m in inputs {
        check_same_dim(init, m)?;
    }
    let geom = geometry_for(&init.points()[0], kind)?;
    Ok((geom, inputs.iter().map(Cloud::from_measure).collect()))
}

/// Free-support barycenter on S^{d-1} by Riemannian SGD with parallel
/// slicing, starting from `init` (whose weights stay fixed).
pub fn barycenter_free_sphere(
    inputs: &[SphereMeasure],
    lambda: &[f64],
    init: &SphereMeasure,
    cfg: &SgdConfig,
) -> Result<FreeSupportResult<UnitVector>> {
    barycenter_free_sphere_with(inputs, lambda, init, cfg, SliceKind::Parallel)
}

/// As [`barycenter_free_sphere`] with a choice of `Parallel` or
/// `Semicircular` (S² only) slicing.
pub fn barycenter_free_sphere_with(
    inputs: &[SphereMeasure],
    lambda: &[f64],
    init: &SphereMeasure,
    cfg: &SgdConfig,
    kind: SliceKind,
) -> Result<FreeSupportResult<UnitVector>> {
    let (geom, targets) = prepare(inputs, lambda, init, cfg, kind)?;
    let (x, loss, tie_steps) = run_sgd(geom, kind, &targets, lambda, Cloud::from_measure(init), cfg);
    let measure = SphereMeasure::from_flat(init.dim(), &x.flat, x.weights);
    Ok(FreeSupportResult { measure, loss, tie_steps })
}

/// Free-support barycenter on SO(3) with trace slicing tr(Rᵀψ), whose
/// Euclidean gradient in R is ψ.
pub fn barycenter_free_so3(
    inputs: &[So3Measure],
    lambda: &[f64],
    init: &So3Measure,
    cfg: &SgdConfig,
) -> Result<FreeSupportResult<Rotation>> {
    let (geom, targets) = prepare(inputs, lambda, init, cfg, SliceKind::So3Trace)?;
    let (x, loss, tie_steps) = run_sgd(geom, SliceKind::So3Trace, &targets, lambda, Cloud::from_measure(init), cfg);
    let points = x.flat.chunks_exact(9).map(|b| Rotation::from_raw(Matrix3::from_row_slice(b))).collect();
    let measure = So3Measure::new(points, x.weights)?;
    Ok(FreeSupportResult { measure, loss, tie_steps })
}
