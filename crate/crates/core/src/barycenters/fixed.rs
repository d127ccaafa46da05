use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::free::{argsort, geometry_for};
use super::{check_lambda, SgdConfig};
use crate::error::{check_simplex, Error, Result};
use crate::ot1d::pow;
use crate::par::{map_indexed, pairwise_sum};
use crate::slicing::ManifoldPoint;

/// Weights on a fixed support: the barycenter is sought among Σ w_j δ_{x_j}
/// for the given inputs Σ v^{(i)}_j δ_{x_j}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedSupportProblem<P> {
    support: Vec<P>,
    inputs: Vec<Vec<f64>>,
    lambda: Vec<f64>,
    p: f64,
}

impl<P: ManifoldPoint> FixedSupportProblem<P> {
    /// Input weights must lie on the simplex within 1e-9 and are renormalized.
    pub fn new(support: Vec<P>, inputs: Vec<Vec<f64>>, lambda: Vec<f64>, p: f64) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::invalid("the support needs at least one point"));
        }
        let d = support[0].ambient_dim();
        if let Some(x) = support.iter().find(|x| x.ambient_dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: x.ambient_dim() });
        }
        check_lambda(&lambda, inputs.len())?;
        crate::ot1d::check_p(p)?;
        let inputs = inputs
            .into_iter()
            .map(|v| {
                if v.len() != support.len() {
                    return Err(Error::DimensionMismatch { expected: support.len(), got: v.len() });
                }
                normalized(v)
            })
            .collect::<Result<_>>()?;
        Ok(Self { support, inputs, lambda, p })
    }

    pub fn support(&self) -> &[P] {
        &self.support
    }

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.inputs
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

fn normalized(v: Vec<f64>) -> Result<Vec<f64>> {
    check_simplex(&v, 1e-9)?;
    let s: f64 = v.iter().sum();
    Ok(v.into_iter().map(|x| x / s).collect())
}

/// Output of a fixed-support run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedSupportResult {
    pub weights: Vec<f64>,
    /// Σ λ_i SW_p^p(μ_w, μ_{v_i}) estimated before each step.
    pub loss: Vec<f64>,
}

/// W_p^p(Σ w_j δ_{t_j}, Σ v_j δ_{t_j}) and its gradient in w, projected onto
/// the hyperplane {Σ x_j = 0}.
pub fn fixed_support_1d_value_and_grad(t: &[f64], w: &[f64], v: &[f64], p: f64) -> Result<(f64, Vec<f64>)> {
    if t.is_empty() {
        return Err(Error::invalid("the support needs at least one point"));
    }
    for x in [w, v] {
        if x.len() != t.len() {
            return Err(Error::DimensionMismatch { expected: t.len(), got: x.len() });
        }
        check_simplex(x, 1e-9)?;
    }
    if !t.windows(2).all(|s| s[0] < s[1]) || !t.iter().all(|x| x.is_finite()) {
        return Err(Error::invalid("support must be finite and strictly increasing"));
    }
    crate::ot1d::check_p(p)?;
    let mut grad = vec![0.0; t.len()];
    let value = value_and_grad(t, w, v, p, &mut grad);
    Ok((value, grad))
}

/// Core of [`fixed_support_1d_value_and_grad`] without checks; ties in `t`
/// are allowed. Writes the projected gradient into `grad`.
pub(crate) fn value_and_grad(t: &[f64], w: &[f64], v: &[f64], p: f64, grad: &mut [f64]) -> f64 {
    let n = t.len();
    grad.iter_mut().for_each(|g| *g = 0.0);
    if n == 1 {
        return 0.0;
    }
    // Partial sums of the first N − 1 entries of w then v; w entries come
    // first so index order puts them ahead on ties.
    let mut u = Vec::with_capacity(2 * (n - 1));
    let mut acc = 0.0;
    u.extend(w[..n - 1].iter().map(|x| {
        acc += x;
        acc
    }));
    acc = 0.0;
    u.extend(v[..n - 1].iter().map(|x| {
        acc += x;
        acc
    }));
    // a_j: cost of the quantile pair on (z_j, z_{j+1}]; zero before the first
    // and after the last breakpoint. The value does not depend on how ties
    // are ordered; the derivative at a w̃_k tied with some ṽ_j is one-sided,
    // so it is averaged over both tie orders, which makes w = v stationary.
    let w_first = argsort(&u);
    let mut v_first: Vec<usize> = (0..u.len()).collect();
    v_first.sort_by(|a, b| u[*a].total_cmp(&u[*b]).then((*a < n - 1).cmp(&(*b < n - 1))).then(a.cmp(b)));
    let mut dpartial = vec![0.0; n - 1];
    let mut value = 0.0;
    for (pass, order) in [w_first, v_first].iter().enumerate() {
        let (mut cw, mut cv) = (0, 0);
        let mut a = Vec::with_capacity(order.len() + 1);
        a.push(0.0);
        for &k in order {
            if k < n - 1 {
                cw += 1;
            } else {
                cv += 1;
            }
            a.push(pow((t[cw] - t[cv]).abs(), p));
        }
        if pass == 0 {
            value = (1..order.len()).map(|j| a[j] * (u[order[j]] - u[order[j - 1]])).sum();
        }
        // ∂/∂w̃_k = a_{j−1} − a_j at the sorted position j of w̃_k.
        for (j, &k) in order.iter().enumerate() {
            if k < n - 1 {
                dpartial[k] += 0.5 * (a[j] - a[j + 1]);
            }
        }
    }
    // w̃_k = Σ_{j≤k} w_j, so ∂/∂w_j = Σ_{k≥j} ∂/∂w̃_k and the last entry is 0.
    let mut run = 0.0;
    for j in (0..n - 1).rev() {
        run += dpartial[j];
        grad[j] = run;
    }
    let mean = grad.iter().sum::<f64>() / n as f64;
    grad.iter_mut().for_each(|g| *g -= mean);
    value
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(x: &[f64]) -> Vec<f64> {
    // Points already on the simplex are returned untouched rather than
    // shifted by a rounding-level threshold.
    let total: f64 = x.iter().sum();
    if x.iter().all(|v| *v >= 0.0) && (total - 1.0).abs() <= 4.0 * f64::EPSILON * x.len() as f64 {
        return x.to_vec();
    }
    let mut u = x.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let (mut css, mut theta) = (0.0, 0.0);
    for (j, uj) in u.iter().enumerate() {
        css += uj;
        let cand = (css - 1.0) / (j + 1) as f64;
        if uj - cand > 0.0 {
            theta = cand;
        }
    }
    x.iter().map(|xi| (xi - theta).max(0.0)).collect()
}

/// Projected stochastic gradient descent on the weights of a fixed support,
/// sliced along the linear slicing of the point type.
pub fn barycenter_fixed<P: ManifoldPoint>(
    problem: &FixedSupportProblem<P>,
    init: &[f64],
    cfg: &SgdConfig,
) -> Result<FixedSupportResult> {
    cfg.validate()?;
    let n = problem.support.len();
    if init.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: init.len() });
    }
    check_simplex(init, 1e-9)?;
    let mut w = init.to_vec();
    let geom = geometry_for(&problem.support[0], P::LINEAR_KIND)?;
    let width = geom.width();
    let flat: Vec<f64> = problem.support.iter().flat_map(|x| x.ambient_coords()).collect();
    let support = DMatrix::from_row_slice(n, width, &flat);
    let (inputs, lambda, p) = (&problem.inputs, &problem.lambda, problem.p);
    let mut loss = Vec::with_capacity(cfg.iterations);
    for l in 0..cfg.iterations {
        let dirs = geom.sample_directions(cfg.slices, &mut cfg.step_stream(l));
        let slices = &support * DMatrix::from_column_slice(width, cfg.slices, &dirs);
        let per_slice = map_indexed(cfg.slices, |q| {
            let col = &slices.as_slice()[q * n..(q + 1) * n];
            let rho = argsort(col);
            let t: Vec<f64> = rho.iter().map(|k| col[*k]).collect();
            let wr: Vec<f64> = rho.iter().map(|k| w[*k]).collect();
            let mut sorted_grad = vec![0.0; n];
            let mut gi = vec![0.0; n];
            let mut value = 0.0;
            for (v, lam) in inputs.iter().zip(lambda) {
                let vr: Vec<f64> = rho.iter().map(|k| v[*k]).collect();
                value += lam * value_and_grad(&t, &wr, &vr, p, &mut gi);
                sorted_grad.iter_mut().zip(&gi).for_each(|(s, g)| *s += lam * g);
            }
            let mut g = vec![0.0; n];
            for (pos, k) in rho.iter().enumerate() {
                g[*k] = sorted_grad[pos];
            }
            (value, g)
        });
        let step_loss = pairwise_sum(&per_slice.iter().map(|s| s.0).collect::<Vec<_>>()) / cfg.slices as f64;
        loss.push(if cfg.eval_separate { eval_loss(problem, &support, geom, &w, cfg, l) } else { step_loss });
        let mut grad = vec![0.0; n];
        for (_, g) in &per_slice {
            grad.iter_mut().zip(g).for_each(|(a, b)| *a += b / cfg.slices as f64);
        }
        // Each slice gradient already lies in the hyperplane; project again to
        // remove rounding drift.
        let mean = grad.iter().sum::<f64>() / n as f64;
        let tau = cfg.schedule.tau(l);
        let moved: Vec<f64> = w.iter().zip(&grad).map(|(wi, gi)| wi - tau * (gi - mean)).collect();
        w = project_simplex(&moved);
    }
    Ok(FixedSupportResult { weights: w, loss })
}

fn eval_loss<P: ManifoldPoint>(
    problem: &FixedSupportProblem<P>,
    support: &DMatrix<f64>,
    geom: super::free::Geometry,
    w: &[f64],
    cfg: &SgdConfig,
    l: usize,
) -> f64 {
    let n = w.len();
    let width = geom.width();
    let dirs = geom.sample_directions(cfg.slices, &mut cfg.eval_stream(l));
    let slices = support * DMatrix::from_column_slice(width, cfg.slices, &dirs);
    let (inputs, lambda, p) = (&problem.inputs, &problem.lambda, problem.p);
    let values = map_indexed(cfg.slices, |q| {
        let col = &slices.as_slice()[q * n..(q + 1) * n];
        let rho = argsort(col);
        let t: Vec<f64> = rho.iter().map(|k| col[*k]).collect();
        let wr: Vec<f64> = rho.iter().map(|k| w[*k]).collect();
        let mut scratch = vec![0.0; n];
        inputs
            .iter()
            .zip(lambda)
            .map(|(v, lam)| {
                let vr: Vec<f64> = rho.iter().map(|k| v[*k]).collect();
                lam * value_and_grad(&t, &wr, &vr, p, &mut scratch)
            })
            .sum::<f64>()
    });
    pairwise_sum(&values) / cfg.slices as f64
}
