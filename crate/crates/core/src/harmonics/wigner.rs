#![allow(non_snake_case)]

use std::f64::consts::PI;

use num_complex::Complex64;

use super::legendre::legendre;
use crate::manifold::Rotation;

/// Wigner d-function d_n^{k,j}(t), t = cos β. Orders with |k| > n or |j| > n
/// give 0.
pub fn wigner_d(n: usize, k: i64, j: i64, t: f64) -> f64 {
    if k.unsigned_abs() as usize > n || j.unsigned_abs() as usize > n {
        return 0.0;
    }
    wigner_d_series(n, k, j, t)[n]
}

/// d_m^{k,j}(t) for m = 0..=n (zero below max(|k|, |j|)), by the three-term
/// recurrence in the degree.
pub(crate) fn wigner_d_series(n: usize, k: i64, j: i64, t: f64) -> Vec<f64> {
    let t = t.clamp(-1.0, 1.0);
    let mut out = vec![0.0; n + 1];
    if k == 0 && j == 0 {
        for (m, v) in out.iter_mut().enumerate() {
            *v = legendre(m, 3, t);
        }
        return out;
    }
    // d^{k,j} = (−1)^{j−k} d^{j,k}; the recurrence is symmetric in (k, j).
    let (k, j, sign) = if k.abs() >= j.abs() { (k, j, 1.0) } else { (j, k, parity(j - k)) };
    let n0 = k.unsigned_abs() as usize;
    if n0 > n {
        return out;
    }
    out[n0] = sign * start(n0, k, j, t);
    let (kf, jf) = (k as f64, j as f64);
    let mut prev = 0.0;
    for m in n0..n {
        let mf = m as f64;
        let a = (2.0 * mf + 1.0) * (mf * (mf + 1.0) * t - kf * jf);
        let b = (mf + 1.0) * ((mf * mf - kf * kf) * (mf * mf - jf * jf)).max(0.0).sqrt();
        let c = mf * (((mf + 1.0).powi(2) - kf * kf) * ((mf + 1.0).powi(2) - jf * jf)).sqrt();
        let next = (a * out[m] - b * prev) / c;
        prev = out[m];
        out[m + 1] = next;
    }
    out
}

fn parity(e: i64) -> f64 {
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// d_n^{k,j} with |k| = n ≥ |j|.
fn start(n: usize, k: i64, j: i64, t: f64) -> f64 {
    // d^{−n,j} = (−1)^{n+j} d^{n,−j}
    let (j, sign) = if k < 0 { (-j, parity(n as i64 + j)) } else { (j, 1.0) };
    let c = ((1.0 + t) / 2.0).sqrt();
    let s = ((1.0 - t) / 2.0).sqrt();
    let up = (n as i64 + j) as usize;
    let down = (n as i64 - j) as usize;
    // √((2n)!/((n+j)!(n−j)!)) via a running product
    let mut binom = 1.0;
    for i in 1..=down {
        binom *= (up + i) as f64 / i as f64;
    }
    sign * parity(down as i64) * binom.sqrt() * c.powi(up as i32) * s.powi(down as i32)
}

/// D_n^{k,j}(Q) = e^{−ikα} d_n^{k,j}(cos β) e^{−ijγ} for the ZYZ Euler angles of Q.
pub fn wigner_D(n: usize, k: i64, j: i64, q: &Rotation) -> Complex64 {
    let (alpha, beta, gamma) = q.to_euler_zyz();
    Complex64::from_polar(wigner_d(n, k, j, beta.cos()), -(k as f64 * alpha + j as f64 * gamma))
}

/// D̃ = √((2n+1)/(8π²)) D, orthonormal on SO(3).
pub fn wigner_D_normalized(n: usize, k: i64, j: i64, q: &Rotation) -> Complex64 {
    wigner_D(n, k, j, q) * normalization(n)
}

pub(crate) fn normalization(n: usize) -> f64 {
    ((2 * n + 1) as f64 / (8.0 * PI * PI)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::gauss_legendre;
    use crate::manifold::{rotation_euler_zyz, sample_uniform_so3};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn factorial(n: i64) -> f64 {
        (1..=n).map(|i| i as f64).product()
    }

    /// Wigner's explicit sum, fine for small degrees.
    fn wigner_sum(n: i64, k: i64, j: i64, beta: f64) -> f64 {
        let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
        let pre = (factorial(n + k) * factorial(n - k) * factorial(n + j) * factorial(n - j)).sqrt();
        let mut acc = 0.0;
        for r in 0..=2 * n {
            let (a, b, e, f) = (n + j - r, r, k - j + r, n - k - r);
            if a < 0 || e < 0 || f < 0 {
                continue;
            }
            let term = c.powi((2 * n + j - k - 2 * r) as i32) * s.powi((k - j + 2 * r) as i32)
                / (factorial(a) * factorial(b) * factorial(e) * factorial(f));
            acc += parity(k - j + r) * term;
        }
        pre * acc
    }

    #[test]
    fn low_degrees() {
        assert_eq!(wigner_d(0, 0, 0, 0.3), 1.0);
        assert_abs_diff_eq!(wigner_d(1, 0, 0, 0.3), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(wigner_d(1, 1, 1, 0.3), 0.65, epsilon = 1e-15);
        assert_eq!(wigner_d(2, 3, 0, 0.3), 0.0);
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        for n in 0..=10i64 {
            for k in -n..=n {
                for j in -n..=n {
                    for beta in [0.0, 0.4, 1.3, 2.2, PI] {
                        let got = wigner_d(n as usize, k, j, f64::cos(beta));
                        assert_abs_diff_eq!(got, wigner_sum(n, k, j, beta), epsilon = 1e-11);
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality_in_degree() {
        let (x, w) = gauss_legendre(40);
        for k in -3i64..=3 {
            for j in -3i64..=3 {
                let lo = k.abs().max(j.abs()) as usize;
                let tabs: Vec<Vec<f64>> = x.iter().map(|t| wigner_d_series(12, k, j, *t)).collect();
                for n in lo..=12 {
                    for m in lo..=12 {
                        let ip: f64 = tabs.iter().zip(&w).map(|(row, w)| w * row[n] * row[m]).sum();
                        let expect = if n == m { 2.0 / (2 * n + 1) as f64 } else { 0.0 };
                        assert_abs_diff_eq!(ip, expect, epsilon = 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn identity_is_kronecker() {
        let id = Rotation::identity();
        for k in -3..=3 {
            for j in -3..=3 {
                let v = wigner_D(3, k, j, &id);
                let expect = if k == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!((v - expect).norm(), 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn gimbal_cases_use_the_angle_sum() {
        let a = rotation_euler_zyz(0.4, 0.0, 0.9);
        let b = rotation_euler_zyz(1.3, 0.0, 0.0);
        let c = rotation_euler_zyz(0.4, PI, 0.9);
        let d = rotation_euler_zyz(-0.5, PI, 0.0);
        for k in -2..=2 {
            for j in -2..=2 {
                assert_abs_diff_eq!((wigner_D(2, k, j, &a) - wigner_D(2, k, j, &b)).norm(), 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!((wigner_D(2, k, j, &c) - wigner_D(2, k, j, &d)).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn monte_carlo_orthogonality() {
        let rs = sample_uniform_so3(20_000, 5);
        let pairs = [(1, 0, 0), (1, 1, -1), (2, 2, 1), (3, -1, 2)];
        for (a, &(n, k, j)) in pairs.iter().enumerate() {
            for (b, &(m, l, i)) in pairs.iter().enumerate() {
                let mean: Complex64 = rs
                    .iter()
                    .map(|r| wigner_D_normalized(n, k, j, r) * wigner_D_normalized(m, l, i, r).conj())
                    .sum::<Complex64>()
                    / rs.len() as f64
                    * (8.0 * PI * PI);
                let expect = if a == b { 1.0 } else { 0.0 };
                // Each summand is bounded by (2n+1)(2m+1)/(8π²) before scaling.
                assert!((mean - expect).norm() < 0.15, "{a},{b}: {mean}");
            }
        }
    }

    proptest! {
        #[test]
        fn product_rule(seed in 0u64..1000, n in 0usize..=8) {
            let rs = sample_uniform_so3(2, seed);
            let (p, q) = (&rs[0], &rs[1]);
            let pq = p.compose(q);
            let ni = n as i64;
            for k in -ni..=ni {
                for j in -ni..=ni {
                    let lhs = wigner_D(n, k, j, &pq);
                    let rhs: Complex64 = (-ni..=ni).map(|l| wigner_D(n, k, l, p) * wigner_D(n, l, j, q)).sum();
                    prop_assert!((lhs - rhs).norm() < 1e-10, "{} {} {}: {} vs {}", n, k, j, lhs, rhs);
                }
            }
        }
    }
}
