use super::measure::{Measure1D, Piece};
use crate::error::{Error, Result};

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("transport exponent p = {p} must be finite and at least 1")));
    }
    Ok(())
}

/// W_p(μ, ν) on a shared interval.
pub fn wasserstein_1d(mu: &Measure1D, nu: &Measure1D, p: f64) -> Result<f64> {
    Ok(wasserstein_1d_pow(mu, nu, p)?.powf(1.0 / p))
}

/// W_p(μ, ν)^p, the integral of |F_μ⁻¹ − F_ν⁻¹|^p over [0, 1].
pub fn wasserstein_1d_pow(mu: &Measure1D, nu: &Measure1D, p: f64) -> Result<f64> {
    check_p(p)?;
    if mu.lo() != nu.lo() || mu.hi() != nu.hi() {
        return Err(Error::invalid(format!(
            "measures live on different intervals [{}, {}] and [{}, {}]",
            mu.lo(),
            mu.hi(),
            nu.lo(),
            nu.hi()
        )));
    }
    Ok(sweep(&mu.quantile_pieces(), &nu.quantile_pieces(), p))
}

/// Integral of |Q_a − Q_b|^p over the merged breakpoints of two piecewise
/// affine quantile functions covering (0, 1].
pub(crate) fn sweep(a: &[Piece], b: &[Piece], p: f64) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut r = 0.0;
    let mut acc = 0.0;
    while i < a.len() && j < b.len() {
        let end = a[i].r1.min(b[j].r1);
        if end > r {
            let d0 = a[i].at(r) - b[j].at(r);
            let d1 = a[i].at(end) - b[j].at(end);
            acc += (end - r) * segment_integral(d0, d1, p);
            r = end;
        }
        if a[i].r1 <= end {
            i += 1;
        }
        if b[j].r1 <= end {
            j += 1;
        }
    }
    acc
}

/// ∫₀¹ |d0 + (d1 − d0)s|^p ds.
pub(crate) fn segment_integral(d0: f64, d1: f64, p: f64) -> f64 {
    if d0 == d1 {
        return pow(d0.abs(), p);
    }
    if p == 2.0 {
        return (d0 * d0 + d0 * d1 + d1 * d1) / 3.0;
    }
    let (a, b) = (d0.abs(), d1.abs());
    if d0 * d1 < 0.0 {
        // The affine function crosses zero once.
        return (pow(a, p + 1.0) + pow(b, p + 1.0)) / ((p + 1.0) * (a + b));
    }
    if p == 1.0 {
        return 0.5 * (a + b);
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if hi - lo <= 1e-6 * hi {
        let (m, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        return pow(m, p) + p * (p - 1.0) / 6.0 * pow(m, p - 2.0) * h * h;
    }
    (pow(hi, p + 1.0) - pow(lo, p + 1.0)) / ((p + 1.0) * (hi - lo))
}

#[inline]
pub(crate) fn pow(x: f64, p: f64) -> f64 {
    if p == 2.0 {
        x * x
    } else if p == 1.0 {
        x
    } else {
        x.powf(p)
    }
}

/// (1/N) Σ |x_(k) − y_(k)|^p for two sorted samples of equal size.
pub fn sorted_matching_pow(xs: &[f64], ys: &[f64], p: f64) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let s: f64 = xs.iter().zip(ys).map(|(x, y)| pow((x - y).abs(), p)).sum();
    s / xs.len() as f64
}
