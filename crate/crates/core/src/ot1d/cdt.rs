use super::measure::Measure1D;
use crate::error::{check_simplex, Error, Result};

/// The cumulative distribution transform of a measure μ relative to a
/// reference ω, sampled on ω's grid: `values(x) = F_μ⁻¹(F_ω(x)) − x`.
#[derive(Debug, Clone, PartialEq)]
pub struct CdtProfile {
    reference: Measure1D,
    values: Vec<f64>,
}

impl CdtProfile {
    pub fn reference(&self) -> &Measure1D {
        &self.reference
    }

    pub fn grid(&self) -> &[f64] {
        self.reference.points()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Wraps explicit values on the reference grid.
    pub fn from_values(reference: Measure1D, values: Vec<f64>) -> Result<Self> {
        check_reference(&reference)?;
        if values.len() != reference.points().len() {
            return Err(Error::DimensionMismatch { expected: reference.points().len(), got: values.len() });
        }
        Ok(Self { reference, values })
    }

    /// ‖h‖ in L²_ω, by the trapezoidal rule.
    pub fn norm_l2(&self) -> f64 {
        let x = self.grid();
        let f = self.reference.values();
        let h2: Vec<f64> = self.values.iter().zip(f).map(|(h, w)| h * h * w).collect();
        let mut acc = 0.0;
        for i in 1..x.len() {
            acc += 0.5 * (h2[i] + h2[i - 1]) * (x[i] - x[i - 1]);
        }
        acc.sqrt()
    }

    /// Σ λ_i h_i over profiles sharing one reference.
    pub fn weighted_sum(profiles: &[CdtProfile], lambda: &[f64]) -> Result<Self> {
        if profiles.is_empty() || profiles.len() != lambda.len() {
            return Err(Error::invalid("need one weight per profile and at least one profile"));
        }
        let reference = &profiles[0].reference;
        if profiles.iter().any(|p| p.reference != *reference) {
            return Err(Error::invalid("profiles use different reference measures"));
        }
        let mut values = vec![0.0; reference.points().len()];
        for (p, l) in profiles.iter().zip(lambda) {
            values.iter_mut().zip(&p.values).for_each(|(v, h)| *v += l * h);
        }
        Ok(Self { reference: reference.clone(), values })
    }
}

fn check_reference(omega: &Measure1D) -> Result<()> {
    if omega.is_discrete() || omega.values().iter().any(|f| !(*f > 0.0)) {
        return Err(Error::invalid("the reference measure needs a strictly positive grid density"));
    }
    Ok(())
}

/// CDT_ω[μ] on the nodes of ω.
pub fn cdt(mu: &Measure1D, omega: &Measure1D) -> Result<CdtProfile> {
    check_reference(omega)?;
    let values = omega
        .points()
        .iter()
        .map(|&x| mu.quantile_unchecked(omega.cdf(x).clamp(0.0, 1.0)) - x)
        .collect();
    Ok(CdtProfile { reference: omega.clone(), values })
}

/// Recovers the measure (h + Id)_# ω as a density on the reference grid.
///
/// The CDF of the pushforward is G(y) = F_ω(g⁻¹(y)) with g = h + Id inverted
/// by monotone interpolation; the density is its central difference quotient.
pub fn cdt_inverse(h: &CdtProfile) -> Result<Measure1D> {
    let omega = &h.reference;
    let x = omega.points();
    let g: Vec<f64> = x.iter().zip(&h.values).map(|(x, v)| x + v).collect();
    let scale = g.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if g.windows(2).any(|w| w[1] < w[0] - 1e-12 * scale) {
        return Err(Error::numeric("transport map h + Id is not monotone"));
    }
    // Remove rounding-level decreases before inverting.
    let mut g = g;
    for i in 1..g.len() {
        if g[i] < g[i - 1] {
            g[i] = g[i - 1];
        }
    }
    let big_g: Vec<f64> = x
        .iter()
        .map(|&y| {
            // largest i with g_i ≤ y
            let k = g.partition_point(|v| *v <= y);
            if k == 0 {
                return 0.0;
            }
            if k == g.len() {
                return 1.0;
            }
            let i = k - 1;
            let xi = x[i] + (x[i + 1] - x[i]) * ((y - g[i]) / (g[i + 1] - g[i]));
            omega.cdf(xi)
        })
        .collect();
    let n = x.len();
    let dens: Vec<f64> = (0..n)
        .map(|k| {
            let (a, b) = (k.saturating_sub(1), (k + 1).min(n - 1));
            (big_g[b] - big_g[a]) / (x[b] - x[a])
        })
        .collect();
    Measure1D::grid_density(x, &dens)
}

/// The W₂ barycenter Σ λ_i μ_i computed by averaging CDTs relative to ω.
pub fn barycenter_1d(measures: &[Measure1D], lambda: &[f64], omega: &Measure1D) -> Result<Measure1D> {
    check_simplex(lambda, 1e-9)?;
    let profiles = measures.iter().map(|m| cdt(m, omega)).collect::<Result<Vec<_>>>()?;
    cdt_inverse(&CdtProfile::weighted_sum(&profiles, lambda)?)
}

/// Density of the W₂ barycenter Σ λ_i μ_i at the points `ys`.
///
/// The barycenter's quantile is Q = Σ λ_i F_{μ_i}⁻¹, the same measure as the
/// CDT average. For y = Q(r) its density is 1/Q'(r) with
/// Q'(r) = Σ λ_i / f_i(F_{μ_i}⁻¹(r)), which only needs pointwise densities
/// and avoids differentiating a sampled map.
pub fn barycenter_density(measures: &[Measure1D], lambda: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
    if measures.is_empty() || measures.len() != lambda.len() {
        return Err(Error::invalid("need one weight per measure and at least one measure"));
    }
    check_simplex(lambda, 1e-9)?;
    if measures.iter().any(Measure1D::is_discrete) {
        return Err(Error::invalid("barycenter densities need grid-density inputs"));
    }
    let q = |r: f64| -> f64 { measures.iter().zip(lambda).map(|(m, l)| l * m.quantile_unchecked(r)).sum() };
    let (q_lo, q_hi) = (q(0.0), q(1.0));
    Ok(ys
        .iter()
        .map(|&y| {
            if !(q_lo..=q_hi).contains(&y) || q_hi <= q_lo {
                return 0.0;
            }
            let (mut a, mut b) = (0.0f64, 1.0f64);
            for _ in 0..60 {
                let mid = 0.5 * (a + b);
                if q(mid) < y {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let r = 0.5 * (a + b);
            let mut slope = 0.0;
            for (m, l) in measures.iter().zip(lambda) {
                if *l == 0.0 {
                    continue;
                }
                let f = m.density_at(m.quantile_unchecked(r)).unwrap_or(0.0);
                if f <= 0.0 {
                    return 0.0;
                }
                slope += l / f;
            }
            1.0 / slope
        })
        .collect())
}
