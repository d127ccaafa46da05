use std::f64::consts::PI;

/// Surface area |S^{d−1}| = 2π^{d/2}/Γ(d/2) of the unit sphere in ℝ^d (d ≥ 1).
pub fn sphere_surface(d: usize) -> f64 {
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (d - 2) as f64 * sphere_surface(d - 2),
    }
}

/// N_{n,d}, the dimension of the degree-n spherical harmonics on S^{d−1}.
pub fn harmonic_dim(n: usize, d: usize) -> f64 {
    assert!(d >= 2, "sphere dimension must be at least 2");
    if n == 0 {
        return 1.0;
    }
    if d == 2 {
        return 2.0;
    }
    // (2n + d − 2)/(n + d − 2) · C(n + d − 2, n)
    let mut binom = 1.0;
    for i in 1..=n {
        binom *= (d - 2 + i) as f64 / i as f64;
    }
    (2 * n + d - 2) as f64 / (n + d - 2) as f64 * binom
}

/// P_{n,d}(t), the Legendre polynomial of dimension d with P_{n,d}(1) = 1.
pub fn legendre(n: usize, d: usize, t: f64) -> f64 {
    assert!(d >= 2, "sphere dimension must be at least 2");
    let (mut p0, mut p1) = (1.0, t);
    if n == 0 {
        return p0;
    }
    for k in 1..n {
        let p2 = ((2 * k + d - 2) as f64 * t * p1 - k as f64 * p0) / (k + d - 2) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn normalization(n: usize, d: usize) -> f64 {
    (harmonic_dim(n, d) * sphere_surface(d - 1) / sphere_surface(d)).sqrt()
}

/// P̃_{n,d} = √(N_{n,d} |S^{d−2}| / |S^{d−1}|) P_{n,d}, orthonormal for the
/// weight (1 − t²)^{(d−3)/2} on [−1, 1].
pub fn legendre_normalized(n: usize, d: usize, t: f64) -> f64 {
    normalization(n, d) * legendre(n, d, t)
}

/// P̃_{0,d}(t), …, P̃_{nmax,d}(t).
pub fn legendre_normalized_table(nmax: usize, d: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax + 1);
    let (mut p0, mut p1) = (1.0, t);
    out.push(normalization(0, d));
    if nmax >= 1 {
        out.push(normalization(1, d) * t);
    }
    for k in 1..nmax {
        let p2 = ((2 * k + d - 2) as f64 * t * p1 - k as f64 * p0) / (k + d - 2) as f64;
        p0 = p1;
        p1 = p2;
        out.push(normalization(k + 1, d) * p1);
    }
    out
}
