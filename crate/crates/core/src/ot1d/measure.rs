use crate::error::{check_simplex, Error, Result};

/// A probability measure on an interval [lo, hi].
#[derive(Debug, Clone, PartialEq)]
pub struct Measure1D {
    lo: f64,
    hi: f64,
    kind: Kind,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Discrete { support: Vec<f64>, weights: Vec<f64>, cum: Vec<f64> },
    Grid { nodes: Vec<f64>, density: Vec<f64>, cum: Vec<f64>, clipped: f64 },
}

/// A piece of a quantile function: on (r0, r1] it runs affinely from q0 to q1.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Piece {
    pub r0: f64,
    pub r1: f64,
    pub q0: f64,
    pub q1: f64,
}

impl Piece {
    #[inline]
    pub fn at(&self, r: f64) -> f64 {
        if self.q0 == self.q1 {
            self.q0
        } else {
            self.q0 + (self.q1 - self.q0) * ((r - self.r0) / (self.r1 - self.r0))
        }
    }
}

impl Measure1D {
    /// A discrete measure on [−1, 1].
    pub fn discrete(points: &[f64], weights: &[f64]) -> Result<Self> {
        Self::discrete_on(-1.0, 1.0, points, weights)
    }

    /// Uniform weights on [−1, 1].
    pub fn uniform_points(points: &[f64]) -> Result<Self> {
        let w = vec![1.0 / points.len() as f64; points.len()];
        Self::discrete(points, &w)
    }

    pub fn dirac(x: f64) -> Self {
        Self::dirac_on(-1.0, 1.0, x)
    }

    pub fn dirac_on(lo: f64, hi: f64, x: f64) -> Self {
        Self::discrete_on(lo, hi, &[x], &[1.0]).expect("dirac inside its interval")
    }

    /// Sorts the support and merges exactly repeated points.
    pub fn discrete_on(lo: f64, hi: f64, points: &[f64], weights: &[f64]) -> Result<Self> {
        check_interval(lo, hi)?;
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), got: weights.len() });
        }
        check_simplex(weights, 1e-9)?;
        if let Some(x) = points.iter().find(|x| !(**x >= lo && **x <= hi)) {
            return Err(Error::invalid(format!("support point {x} outside [{lo}, {hi}]")));
        }
        let mut idx: Vec<usize> = (0..points.len()).collect();
        idx.sort_by(|&a, &b| points[a].total_cmp(&points[b]));
        let mut support = Vec::with_capacity(points.len());
        let mut w = Vec::with_capacity(points.len());
        for i in idx {
            if support.last() == Some(&points[i]) {
                *w.last_mut().unwrap() += weights[i];
            } else {
                support.push(points[i]);
                w.push(weights[i]);
            }
        }
        Ok(Self::from_sorted_parts(lo, hi, support, w))
    }

    /// Builds from an already sorted, duplicate-free support.
    pub(crate) fn from_sorted_parts(lo: f64, hi: f64, support: Vec<f64>, mut weights: Vec<f64>) -> Self {
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let cum = cumulative(&weights);
        Self { lo, hi, kind: Kind::Discrete { support, weights, cum } }
    }

    /// A density sampled at increasing `nodes`. Negative values are floored at
    /// zero and the result is renormalized; the floored mass is kept and
    /// reported by [`clipped_mass`](Self::clipped_mass).
    pub fn grid_density(nodes: &[f64], density: &[f64]) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::invalid("a grid density needs at least two nodes"));
        }
        if nodes.len() != density.len() {
            return Err(Error::DimensionMismatch { expected: nodes.len(), got: density.len() });
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("grid nodes must be strictly increasing"));
        }
        if density.iter().any(|f| !f.is_finite()) {
            return Err(Error::numeric("density has non-finite values"));
        }
        let negative: Vec<f64> = density.iter().map(|f| (-f).max(0.0)).collect();
        let clipped = trapezoid_cum(nodes, &negative).last().copied().unwrap_or(0.0);
        let mut dens: Vec<f64> = density.iter().map(|f| f.max(0.0)).collect();
        let cum = trapezoid_cum(nodes, &dens);
        let total = *cum.last().unwrap();
        if !(total > 0.0) {
            return Err(Error::numeric("density has no positive mass"));
        }
        dens.iter_mut().for_each(|f| *f /= total);
        let mut cum: Vec<f64> = cum.iter().map(|c| c / total).collect();
        *cum.last_mut().unwrap() = 1.0;
        Ok(Self {
            lo: nodes[0],
            hi: *nodes.last().unwrap(),
            kind: Kind::Grid { nodes: nodes.to_vec(), density: dens, cum, clipped: clipped / total },
        })
    }

    /// Samples `f` at `cells + 1` equispaced nodes of [lo, hi].
    pub fn from_density_fn(lo: f64, hi: f64, cells: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        check_interval(lo, hi)?;
        let nodes = equispaced(lo, hi, cells);
        let dens: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        Self::grid_density(&nodes, &dens)
    }

    /// The uniform density on [lo, hi] with `cells` grid cells.
    pub fn uniform(lo: f64, hi: f64, cells: usize) -> Result<Self> {
        Self::from_density_fn(lo, hi, cells, |_| 1.0)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.kind, Kind::Discrete { .. })
    }

    /// Support points (discrete) or grid nodes.
    pub fn points(&self) -> &[f64] {
        match &self.kind {
            Kind::Discrete { support, .. } => support,
            Kind::Grid { nodes, .. } => nodes,
        }
    }

    /// Atom weights (discrete) or normalized node densities.
    pub fn values(&self) -> &[f64] {
        match &self.kind {
            Kind::Discrete { weights, .. } => weights,
            Kind::Grid { density, .. } => density,
        }
    }

    /// Density at x by linear interpolation between grid nodes; `None` for
    /// discrete measures.
    pub fn density_at(&self, x: f64) -> Option<f64> {
        match &self.kind {
            Kind::Discrete { .. } => None,
            Kind::Grid { nodes, density, .. } => {
                if x < nodes[0] || x > *nodes.last().unwrap() {
                    return Some(0.0);
                }
                let j = nodes.partition_point(|s| *s <= x).clamp(1, nodes.len() - 1);
                let (a, b) = (nodes[j - 1], nodes[j]);
                let s = (x - a) / (b - a);
                Some(density[j - 1] + (density[j] - density[j - 1]) * s)
            }
        }
    }

    /// Relative mass removed when negative density values were floored.
    pub fn clipped_mass(&self) -> f64 {
        match &self.kind {
            Kind::Discrete { .. } => 0.0,
            Kind::Grid { clipped, .. } => *clipped,
        }
    }

    /// F(x) = μ([lo, x]).
    pub fn cdf(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Discrete { support, cum, .. } => {
                let k = support.partition_point(|s| *s <= x);
                if k == 0 {
                    0.0
                } else {
                    cum[k - 1]
                }
            }
            Kind::Grid { nodes, cum, .. } => {
                if x <= nodes[0] {
                    return 0.0;
                }
                if x >= *nodes.last().unwrap() {
                    return 1.0;
                }
                let j = nodes.partition_point(|s| *s <= x);
                let (a, b) = (nodes[j - 1], nodes[j]);
                cum[j - 1] + (cum[j] - cum[j - 1]) * (x - a) / (b - a)
            }
        }
    }

    /// F⁻¹(r) = min{x : F(x) ≥ r}; at r = 0 the infimum of the support.
    pub fn quantile(&self, r: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::invalid(format!("quantile level {r} outside [0, 1]")));
        }
        Ok(self.quantile_unchecked(r))
    }

    pub(crate) fn quantile_unchecked(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::Discrete { support, cum, .. } => {
                let k = cum.partition_point(|c| *c < r);
                support[k.min(support.len() - 1)]
            }
            Kind::Grid { nodes, cum, .. } => {
                if r <= 0.0 {
                    let k = cum.partition_point(|c| *c <= 0.0);
                    return nodes[k.saturating_sub(1)];
                }
                let j = cum.partition_point(|c| *c < r);
                if j >= nodes.len() {
                    return *nodes.last().unwrap();
                }
                let (c0, c1) = (cum[j - 1], cum[j]);
                nodes[j - 1] + (nodes[j] - nodes[j - 1]) * ((r - c0) / (c1 - c0))
            }
        }
    }

    /// The quantile function as a list of affine pieces covering (0, 1].
    pub(crate) fn quantile_pieces(&self) -> Vec<Piece> {
        let mut out = Vec::new();
        match &self.kind {
            Kind::Discrete { support, cum, .. } => {
                let mut r0 = 0.0;
                for (x, &c) in support.iter().zip(cum) {
                    if c > r0 {
                        out.push(Piece { r0, r1: c, q0: *x, q1: *x });
                        r0 = c;
                    }
                }
            }
            Kind::Grid { nodes, cum, .. } => {
                for i in 0..nodes.len() - 1 {
                    if cum[i + 1] > cum[i] {
                        out.push(Piece { r0: cum[i], r1: cum[i + 1], q0: nodes[i], q1: nodes[i + 1] });
                    }
                }
            }
        }
        if let Some(last) = out.last_mut() {
            last.r1 = 1.0;
        }
        out
    }

    /// Mean of the measure.
    pub fn mean(&self) -> f64 {
        self.quantile_pieces().iter().map(|p| (p.r1 - p.r0) * 0.5 * (p.q0 + p.q1)).sum()
    }
}

pub(crate) fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::invalid(format!("invalid interval [{lo}, {hi}]")));
    }
    Ok(())
}

pub(crate) fn equispaced(lo: f64, hi: f64, cells: usize) -> Vec<f64> {
    let cells = cells.max(1);
    (0..=cells).map(|i| if i == cells { hi } else { lo + (hi - lo) * i as f64 / cells as f64 }).collect()
}

fn cumulative(w: &[f64]) -> Vec<f64> {
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

fn trapezoid_cum(x: &[f64], f: &[f64]) -> Vec<f64> {
    let mut cum = Vec::with_capacity(x.len());
    let mut acc = 0.0;
    cum.push(0.0);
    for i in 1..x.len() {
        acc += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
        cum.push(acc);
    }
    cum
}
