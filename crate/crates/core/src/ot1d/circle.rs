use std::f64::consts::TAU;

use super::wasserstein::{check_p, pow};
use crate::error::{check_simplex, Error, Result};

/// A discrete probability measure on the circle ℝ/2πℤ.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleMeasure {
    angles: Vec<f64>,
    weights: Vec<f64>,
    cum: Vec<f64>,
}

impl CircleMeasure {
    /// Wraps angles into [0, 2π), sorts them and merges repeated atoms.
    pub fn new(angles: &[f64], weights: &[f64]) -> Result<Self> {
        if angles.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: angles.len(), got: weights.len() });
        }
        check_simplex(weights, 1e-9)?;
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("angles must be finite"));
        }
        let wrapped: Vec<f64> = angles.iter().map(|a| wrap(*a)).collect();
        let mut idx: Vec<usize> = (0..angles.len()).collect();
        idx.sort_by(|&a, &b| wrapped[a].total_cmp(&wrapped[b]));
        let mut xs: Vec<f64> = Vec::with_capacity(idx.len());
        let mut ws: Vec<f64> = Vec::with_capacity(idx.len());
        for i in idx {
            if xs.last() == Some(&wrapped[i]) {
                *ws.last_mut().unwrap() += weights[i];
            } else {
                xs.push(wrapped[i]);
                ws.push(weights[i]);
            }
        }
        let total: f64 = ws.iter().sum();
        ws.iter_mut().for_each(|w| *w /= total);
        let cum = cumulative(&ws);
        Ok(Self { angles: xs, weights: ws, cum })
    }

    pub fn uniform(angles: &[f64]) -> Result<Self> {
        Self::new(angles, &vec![1.0 / angles.len() as f64; angles.len()])
    }

    pub fn dirac(angle: f64) -> Self {
        Self::new(&[angle], &[1.0]).expect("finite angle")
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

pub(crate) fn wrap(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

pub(crate) fn cumulative(w: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cum: Vec<f64> = w
        .iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect();
    if let Some(last) = cum.last_mut() {
        *last = 1.0;
    }
    cum
}

/// Optimal circle transport between two measures.
#[derive(Debug, Clone)]
pub struct CirclePlan {
    /// W_p^p for the geodesic cost.
    pub cost_pow: f64,
    /// The optimal shift α of the lifted quantile of ν.
    pub shift: f64,
    /// ∂ cost_pow / ∂ angle for each atom of μ, in sorted atom order.
    pub atom_grad: Vec<f64>,
}

/// W_p on the circle with geodesic cost min(|s − t|, 2π − |s − t|).
pub fn wasserstein_circle(mu: &CircleMeasure, nu: &CircleMeasure, p: f64) -> Result<f64> {
    Ok(circle_transport(mu, nu, p)?.cost_pow.powf(1.0 / p))
}

/// Solves circle OT by minimizing over the shift α the interval cost
/// ∫₀¹ |F_μ⁻¹(t) − F̃_ν⁻¹(t + α)|^p dt, where F̃_ν⁻¹ is the quantile of ν
/// lifted to ℝ (F̃⁻¹(s + 1) = F̃⁻¹(s) + 2π). The map α ↦ cost is convex and
/// its minimizer lies in [−1, 1], so golden-section search converges to the
/// global optimum.
pub fn circle_transport(mu: &CircleMeasure, nu: &CircleMeasure, p: f64) -> Result<CirclePlan> {
    check_p(p)?;
    let mut solver = CircleSolver::default();
    let (cost, shift) = solver.solve(&mu.angles, &mu.cum, &nu.angles, &nu.cum, p);
    let mut atom_grad = vec![0.0; mu.angles.len()];
    solver.cost_at(&mu.angles, &mu.cum, &nu.angles, &nu.cum, shift, p, Some(&mut atom_grad));
    Ok(CirclePlan { cost_pow: cost, shift, atom_grad })
}

/// W_p^p on the circle reusing `solver`'s buffers.
pub(crate) fn circle_cost_pow(mu: &CircleMeasure, nu: &CircleMeasure, p: f64, solver: &mut CircleSolver) -> f64 {
    solver.solve(&mu.angles, &mu.cum, &nu.angles, &nu.cum, p).0
}

/// Reusable buffers for repeated circle transport solves.
#[derive(Default)]
pub(crate) struct CircleSolver {
    shifted: Vec<(f64, f64)>,
}

impl CircleSolver {
    /// Minimum cost and minimizing shift. `xc`, `yc` are cumulative weights
    /// ending in exactly 1.
    pub fn solve(&mut self, x: &[f64], xc: &[f64], y: &[f64], yc: &[f64], p: f64) -> (f64, f64) {
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        let (mut a, mut b) = (-1.0f64, 1.0f64);
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let mut fc = self.cost_at(x, xc, y, yc, c, p, None);
        let mut fd = self.cost_at(x, xc, y, yc, d, p, None);
        while b - a > 1e-14 {
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = self.cost_at(x, xc, y, yc, c, p, None);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = self.cost_at(x, xc, y, yc, d, p, None);
            }
        }
        let (mut best, mut shift) = if fc <= fd { (fc, c) } else { (fd, d) };
        // The cost is piecewise linear in α with kinks where a shifted ν
        // breakpoint m + G_ν(y_j) − α meets a μ breakpoint; snap to nearby
        // kinks, computing α directly from the breakpoints.
        let m0 = shift.floor();
        let mut candidates = Vec::new();
        for m in [m0, m0 + 1.0] {
            for c in yc {
                let e = m + c - shift;
                if !(0.0..=1.0).contains(&e) {
                    continue;
                }
                let k = xc.partition_point(|v| *v < e);
                for i in [k.checked_sub(1), Some(k)].into_iter().flatten() {
                    if let Some(xv) = xc.get(i) {
                        if (e - xv).abs() < 1e-9 {
                            candidates.push((m + c) - xv);
                        }
                    }
                }
            }
        }
        // Equal-weight measures line up every breakpoint at the optimum, so
        // the same kink shows up once per atom.
        candidates.sort_by(f64::total_cmp);
        candidates.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        for cand in candidates {
            let f = self.cost_at(x, xc, y, yc, cand, p, None);
            if f < best {
                best = f;
                shift = cand;
            }
        }
        (best, shift)
    }

    /// Interval cost at shift α; optionally accumulates ∂cost/∂x_i.
    #[allow(clippy::too_many_arguments)]
    pub fn cost_at(
        &mut self,
        x: &[f64],
        xc: &[f64],
        y: &[f64],
        yc: &[f64],
        alpha: f64,
        p: f64,
        mut grad: Option<&mut [f64]>,
    ) -> f64 {
        self.fill_shifted(y, yc, alpha);
        let b = &self.shifted;
        let (mut i, mut j) = (0, 0);
        let mut r = 0.0;
        let mut acc = 0.0;
        while i < x.len() && j < b.len() {
            let end = xc[i].min(b[j].0);
            if end > r {
                let diff = x[i] - b[j].1;
                let len = end - r;
                acc += len * pow(diff.abs(), p);
                if let Some(g) = grad.as_deref_mut() {
                    g[i] += len * p * pow(diff.abs(), p - 1.0) * diff.signum();
                }
                r = end;
            }
            if xc[i] <= end {
                i += 1;
            }
            if b[j].0 <= end {
                j += 1;
            }
        }
        acc
    }

    /// Pieces (right end in t, value) of t ↦ F̃_ν⁻¹(t + α) on (0, 1].
    fn fill_shifted(&mut self, y: &[f64], yc: &[f64], alpha: f64) {
        let buf = &mut self.shifted;
        buf.clear();
        let m0 = alpha.floor();
        'outer: for m in [m0, m0 + 1.0] {
            let lift = TAU * m;
            for (yy, c) in y.iter().zip(yc) {
                let end = m + c - alpha;
                if end <= 0.0 {
                    continue;
                }
                if end >= 1.0 {
                    buf.push((1.0, yy + lift));
                    break 'outer;
                }
                buf.push((end, yy + lift));
            }
        }
        if let Some(last) = buf.last_mut() {
            last.0 = 1.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn geodesic(a: f64, b: f64) -> f64 {
        let d = (a - b).abs().rem_euclid(TAU);
        d.min(TAU - d)
    }

    /// Best cyclic shift of the sorted matching (optimal for equal weights).
    fn brute_force(x: &[f64], y: &[f64], p: f64) -> f64 {
        let mut xs: Vec<f64> = x.iter().map(|a| wrap(*a)).collect();
        let mut ys: Vec<f64> = y.iter().map(|a| wrap(*a)).collect();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        let n = xs.len();
        (0..n)
            .map(|k| (0..n).map(|i| geodesic(xs[i], ys[(i + k) % n]).powf(p)).sum::<f64>() / n as f64)
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn diracs_use_the_shorter_arc() {
        let w = wasserstein_circle(&CircleMeasure::dirac(0.0), &CircleMeasure::dirac(PI), 2.0).unwrap();
        assert_abs_diff_eq!(w, PI, epsilon = 1e-12);
        let w = wasserstein_circle(&CircleMeasure::dirac(0.0), &CircleMeasure::dirac(1.5 * PI), 2.0).unwrap();
        assert_abs_diff_eq!(w, FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn identical_measures_cost_nothing() {
        let m = CircleMeasure::uniform(&[0.1, 2.0, 4.0, 6.2]).unwrap();
        assert!(wasserstein_circle(&m, &m, 2.0).unwrap() < 1e-7);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let x = [0.3, 1.7, 2.9, 5.1];
        let y = [0.9, 2.2, 4.4, 6.0];
        let nu = CircleMeasure::uniform(&y).unwrap();
        let plan = circle_transport(&CircleMeasure::uniform(&x).unwrap(), &nu, 2.0).unwrap();
        let h = 1e-6;
        for i in 0..4 {
            let mut xp = x;
            xp[i] += h;
            let mut xm = x;
            xm[i] -= h;
            let fp = circle_transport(&CircleMeasure::uniform(&xp).unwrap(), &nu, 2.0).unwrap().cost_pow;
            let fm = circle_transport(&CircleMeasure::uniform(&xm).unwrap(), &nu, 2.0).unwrap().cost_pow;
            assert_abs_diff_eq!(plan.atom_grad[i], (fp - fm) / (2.0 * h), epsilon = 1e-6);
        }
    }

    proptest! {
        #[test]
        fn matches_cyclic_brute_force(
            v in prop::collection::vec((0.0..TAU, 0.0..TAU), 1..=8), p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0])
        ) {
            let (x, y): (Vec<f64>, Vec<f64>) = v.into_iter().unzip();
            let got = circle_transport(&CircleMeasure::uniform(&x).unwrap(), &CircleMeasure::uniform(&y).unwrap(), p)
                .unwrap()
                .cost_pow;
            prop_assert!((got - brute_force(&x, &y, p)).abs() < 1e-9);
        }

        #[test]
        fn never_exceeds_the_cut_at_zero(
            v in prop::collection::vec((0.0..TAU, 0.0..TAU, 0.01..1.0f64), 1..=8)
        ) {
            let s: f64 = v.iter().map(|t| t.2).sum();
            let x: Vec<f64> = v.iter().map(|t| t.0).collect();
            let y: Vec<f64> = v.iter().map(|t| t.1).collect();
            let w: Vec<f64> = v.iter().map(|t| t.2 / s).collect();
            let mu = CircleMeasure::new(&x, &w).unwrap();
            let nu = CircleMeasure::uniform(&y).unwrap();
            let circ = circle_transport(&mu, &nu, 2.0).unwrap().cost_pow;
            let a = crate::ot1d::Measure1D::discrete_on(0.0, TAU, &x, &w).unwrap();
            let bb = crate::ot1d::Measure1D::discrete_on(0.0, TAU, &y, &vec![1.0 / y.len() as f64; y.len()]).unwrap();
            let line = crate::ot1d::wasserstein_1d_pow(&a, &bb, 2.0).unwrap();
            prop_assert!(circ <= line + 1e-12);
        }
    }
}
