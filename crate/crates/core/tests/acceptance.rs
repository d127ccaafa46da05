//! Acceptance suite. Each test prints one line
//! `criterion N (name): PASS|FAIL: detail` and then asserts. The tests share
//! a lock so timings are not disturbed by each other; run with
//! `cargo test --release -p slicedot --test acceptance -- --nocapture`.

use std::f64::consts::PI;
use std::sync::Mutex;
use std::time::Instant;

use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};
use nalgebra::Matrix3;
use num_complex::Complex64;
use rand::Rng;

use slicedot::barycenters::{
    barycenter_free_sphere, barycenter_radon, fixed_support_1d_value_and_grad, sw_gradient_free, RadonBarycenterConfig,
    SgdConfig, StepSchedule,
};
use slicedot::bench::{loglog_slope, time_barycenter, BenchKind};
use slicedot::datasets::{shape_measure, vmf_density, vmf_sample, Shape, VmfParams};
use slicedot::distances::{
    antipodal_energy, psw, psw_with_directions, so3_directions, sosw, sosw_via_s3, sosw_with_directions,
    sphere_directions, ssw, SliceBudget,
};
use slicedot::harmonics::{sht_inverse, slice_svd_forward, so3_radon_eigenvalue, SphereCoeffs, SphereGrid};
use slicedot::manifold::{
    exp_sphere, proj_tangent_sphere, rotation_axis_angle, rotation_euler_zyz, sample_uniform_so3,
    sample_uniform_sphere, Rotation, UnitVector,
};
use slicedot::ot1d::{wasserstein_1d_pow, wasserstein_circle, CircleMeasure, Measure1D};
use slicedot::rng::seeded;
use slicedot::slicing::{so3_radon_function, So3Measure, SliceDirection, SliceKind, SphereMeasure};

static SERIAL: Mutex<()> = Mutex::new(());

fn report(id: u32, name: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id} ({name}): {verdict}: {detail}");
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn lock() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn random_weights(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| 0.05 + rng.random::<f64>()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

fn random_sphere_measure(rng: &mut impl Rng, n: usize, seed: u64) -> SphereMeasure {
    SphereMeasure::new(sample_uniform_sphere(3, n, seed).unwrap(), random_weights(rng, n)).unwrap()
}

fn dirac(x: UnitVector) -> SphereMeasure {
    SphereMeasure::new(vec![x], vec![1.0]).unwrap()
}

// ---------------------------------------------------------------------------
// Independent harmonic oracles.

fn fact(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binom(n: i64, k: i64) -> f64 {
    fact(n) / (fact(k) * fact(n - k))
}

/// P_n^m(x) with the Condon–Shortley phase, from the explicit power sum of
/// P_n differentiated m times.
fn assoc_legendre(n: i64, m: i64, x: f64) -> f64 {
    let mut deriv = 0.0;
    for j in 0..=n / 2 {
        let e = n - 2 * j;
        if e < m {
            continue;
        }
        let c = (-1f64).powi(j as i32) * binom(n, j) * binom(2 * n - 2 * j, n) / 2f64.powi(n as i32);
        deriv += c * fact(e) / fact(e - m) * x.powi((e - m) as i32);
    }
    (-1f64).powi(m as i32) * (1.0 - x * x).powf(m as f64 / 2.0) * deriv
}

/// Orthonormal Y_n^k at a point of S².
fn ylm(n: i64, k: i64, x: &[f64]) -> Complex64 {
    let m = k.abs();
    let theta = x[2].clamp(-1.0, 1.0).acos();
    let phi = x[1].atan2(x[0]);
    let norm = ((2 * n + 1) as f64 / (4.0 * PI) * fact(n - m) / fact(n + m)).sqrt();
    let y = norm * assoc_legendre(n, m, theta.cos()) * Complex64::from_polar(1.0, m as f64 * phi);
    if k >= 0 {
        y
    } else {
        (-1f64).powi(m as i32) * y.conj()
    }
}

/// Half the mean of f over the subcircle {⟨ξ, ψ⟩ = t}, by the trapezoidal
/// rule on `nodes` equispaced points.
fn subcircle_oracle(f: impl Fn(&[f64]) -> f64, psi: &[f64], t: f64, nodes: usize) -> f64 {
    let seed = if psi[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d: f64 = (0..3).map(|i| seed[i] * psi[i]).sum();
    let mut u: Vec<f64> = (0..3).map(|i| seed[i] - d * psi[i]).collect();
    let nu = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    u.iter_mut().for_each(|v| *v /= nu);
    let v = [psi[1] * u[2] - psi[2] * u[1], psi[2] * u[0] - psi[0] * u[2], psi[0] * u[1] - psi[1] * u[0]];
    let r = (1.0 - t * t).sqrt();
    let sum: f64 = (0..nodes)
        .map(|m| {
            let a = 2.0 * PI * m as f64 / nodes as f64;
            let x: Vec<f64> = (0..3).map(|i| t * psi[i] + r * (a.cos() * u[i] + a.sin() * v[i])).collect();
            f(&x)
        })
        .sum();
    sum / (2.0 * nodes as f64)
}

/// Euler angles of R = R_z(α) R_y(β) R_z(γ) read from the matrix entries.
fn zyz_angles(r: &Rotation) -> (f64, f64, f64) {
    let m = r.matrix();
    let beta = m[(2, 2)].clamp(-1.0, 1.0).acos();
    if beta.sin() < 1e-10 {
        return (m[(1, 0)].atan2(m[(0, 0)]), beta, 0.0);
    }
    (m[(1, 2)].atan2(m[(0, 2)]), beta, m[(2, 1)].atan2(-m[(2, 0)]))
}

/// Wigner small d^n_{kj}(β) from the explicit factorial sum.
fn small_d(n: i64, k: i64, j: i64, beta: f64) -> f64 {
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let pre = (fact(n + k) * fact(n - k) * fact(n + j) * fact(n - j)).sqrt();
    let mut acc = 0.0;
    for q in 0..=2 * n {
        let (a, b, e, g) = (n + j - q, q, k - j + q, n - k - q);
        if a < 0 || e < 0 || g < 0 {
            continue;
        }
        let sign = (-1f64).powi((k - j + q) as i32);
        acc += sign / (fact(a) * fact(b) * fact(e) * fact(g))
            * c.powi((2 * n + j - k - 2 * q) as i32)
            * s.powi((k - j + 2 * q) as i32);
    }
    pre * acc
}

/// D^n_{kj}(R) = e^{−ikα} d^n_{kj}(β) e^{−ijγ}.
fn big_d(n: i64, k: i64, j: i64, r: &Rotation) -> Complex64 {
    let (a, b, g) = zyz_angles(r);
    Complex64::from_polar(1.0, -(k as f64) * a - (j as f64) * g) * small_d(n, k, j, b)
}

fn random_rotation(rng: &mut impl Rng) -> Rotation {
    rotation_euler_zyz(2.0 * PI * rng.random::<f64>(), (1.0 - 2.0 * rng.random::<f64>()).acos(), 2.0 * PI * rng.random::<f64>())
}

// ---------------------------------------------------------------------------
// Transport LP oracle.

/// min Σ c(x_i, y_j) π_ij over couplings of a and b.
fn lp_transport(a: &[f64], b: &[f64], cost: impl Fn(usize, usize) -> f64) -> f64 {
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<Vec<_>> =
        (0..a.len()).map(|i| (0..b.len()).map(|j| lp.add_var(cost(i, j), (0.0, f64::INFINITY))).collect()).collect();
    for (i, ai) in a.iter().enumerate() {
        let mut e = LinearExpr::empty();
        vars[i].iter().for_each(|v| e.add(*v, 1.0));
        lp.add_constraint(e, ComparisonOp::Eq, *ai);
    }
    // The last column constraint is implied by the others.
    for (j, bj) in b.iter().enumerate().take(b.len() - 1) {
        let mut e = LinearExpr::empty();
        vars.iter().for_each(|row| e.add(row[j], 1.0));
        lp.add_constraint(e, ComparisonOp::Eq, *bj);
    }
    lp.solve().expect("transport LP is feasible and bounded").objective()
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_01_antipodal_energy() {
    let _g = lock();
    let start = Instant::now();
    let mut rng = seeded(101);
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for trial in 0..10u64 {
        let nu = random_sphere_measure(&mut rng, 100, 1000 + trial);
        let e = antipodal_energy(&nu, &SliceBudget::new(10_000, 2000 + trial, 2.0).unwrap()).unwrap();
        let z = (e.raw_pth_power - 2.0 / 3.0).abs() / e.stderr;
        worst = worst.max(z);
        pass &= z <= 3.0;
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 10.0;
    report(1, "antipodal energy", pass, format!("max |E - 2/3| = {worst:.2} stderr over 10 measures, {secs:.2} s"));
}

#[test]
fn criterion_02_semicircular_energy() {
    let _g = lock();
    let start = Instant::now();
    let north = dirac(UnitVector::basis(3, 2));
    let south = dirac(UnitVector::basis(3, 2).antipode());
    let energy = |nu: &SphereMeasure, seed: u64| {
        let a = ssw(nu, &north, &SliceBudget::new(2000, seed, 2.0).unwrap()).unwrap();
        let b = ssw(nu, &south, &SliceBudget::new(2000, seed + 1, 2.0).unwrap()).unwrap();
        (0.5 * (a.raw_pth_power + b.raw_pth_power), 0.5 * a.stderr.hypot(b.stderr), a)
    };
    let uniform = SphereMeasure::uniform(sample_uniform_sphere(3, 2000, 21).unwrap()).unwrap();
    let equator = shape_measure(Shape::Equator, 2000, 22).unwrap();
    let (eu, su, half) = energy(&uniform, 31);
    let (ee, se, _) = energy(&equator, 41);
    let target = PI * PI / 3.0;
    let rel = (half.raw_pth_power - target).abs() / target;
    let gap = (eu - ee) / su.hypot(se);
    let secs = start.elapsed().as_secs_f64();
    let pass = rel < 0.05 && gap > 3.0 && secs < 60.0;
    report(
        2,
        "semicircular energy",
        pass,
        format!(
            "SSW2^2(u, north) = {:.4} vs pi^2/3 = {target:.4} ({:.2}%); E(equator) = {ee:.4} below E(u) = {eu:.4} by {gap:.1} stderr; {secs:.2} s",
            half.raw_pth_power,
            100.0 * rel
        ),
    );
}

#[test]
fn criterion_03_sphere_svd_oracle() {
    let _g = lock();
    let mut rng = seeded(303);
    let pairs: Vec<(UnitVector, f64)> = (0..20)
        .map(|q| (sample_uniform_sphere(3, 1, 500 + q).unwrap().remove(0), 2.0 * rng.random::<f64>() - 1.0))
        .collect();
    let mut worst: f64 = 0.0;
    for n in 0..=8i64 {
        for k in -n..=n {
            // Coefficient 1 picks out Re Y_n^k, coefficient −i picks out Im Y_n^k.
            for (coef, part) in [(Complex64::new(1.0, 0.0), 0), (Complex64::new(0.0, -1.0), 1)] {
                let mut c = SphereCoeffs::zeros(8);
                c.set(n as usize, k, coef);
                let f = |x: &[f64]| {
                    let y = ylm(n, k, x);
                    if part == 0 { y.re } else { y.im }
                };
                let (mut diff, mut scale): (f64, f64) = (0.0, 0.0);
                for (psi, t) in &pairs {
                    let got = slice_svd_forward(&c, psi, &[*t]).unwrap()[0];
                    let want = subcircle_oracle(f, psi.coords(), *t, 64);
                    diff = diff.max((got - want).abs());
                    scale = scale.max(want.abs());
                }
                if scale > 1e-12 {
                    worst = worst.max(diff / scale);
                } else {
                    worst = worst.max(diff);
                }
            }
        }
    }
    report(3, "sphere SVD oracle", worst < 1e-6, format!("max relative error {worst:.2e} over n <= 8, all k, 20 (psi, t)"));
}

#[test]
fn criterion_04_so3_svd_oracle() {
    let _g = lock();
    let mut rng = seeded(404);
    // The oracle must itself be a representation: D(AB) = D(A) D(B).
    let mut hom: f64 = 0.0;
    for _ in 0..5 {
        let (a, b) = (random_rotation(&mut rng), random_rotation(&mut rng));
        let ab = a.compose(&b);
        for n in 0..=3i64 {
            for k in -n..=n {
                for j in -n..=n {
                    let prod: Complex64 = (-n..=n).map(|m| big_d(n, k, m, &a) * big_d(n, m, j, &b)).sum();
                    hom = hom.max((prod - big_d(n, k, j, &ab)).norm());
                }
            }
        }
    }
    let grid = SphereGrid::for_degree(14);
    let mut worst: f64 = 0.0;
    let mut eig: f64 = 0.0;
    let mut zero_residual: f64 = 0.0;
    for n in 0..=6i64 {
        let nf = n as f64;
        for k in -n..=n {
            for j in -n..=n {
                for part in 0..2 {
                    let f = |r: &Rotation| {
                        let d = big_d(n, k, j, r);
                        if part == 0 { d.re } else { d.im }
                    };
                    let (mut diff, mut scale): (f64, f64) = (0.0, 0.0);
                    for _ in 0..3 {
                        let q = random_rotation(&mut rng);
                        let omega = PI * rng.random::<f64>();
                        let kernel = 2.0 / ((2.0 * nf + 1.0) * PI) * ((nf + 0.5) * omega).sin() * (omega / 2.0).sin();
                        eig = eig.max((kernel - so3_radon_eigenvalue(n as usize, omega)).abs());
                        let want = kernel * f(&q);
                        diff = diff.max((so3_radon_function(f, &q, omega, &grid) - want).abs());
                        scale = scale.max(want.abs());
                    }
                    worst = worst.max(if scale > 1e-12 { diff / scale } else { diff });
                    // Zeros of the kernel at (n + ½)ω = mπ.
                    let q = random_rotation(&mut rng);
                    for m in 1..=n {
                        let omega = m as f64 * PI / (nf + 0.5);
                        zero_residual = zero_residual.max(so3_radon_function(f, &q, omega, &grid).abs());
                        zero_residual = zero_residual.max(so3_radon_eigenvalue(n as usize, omega).abs());
                    }
                }
            }
        }
    }
    let pass = worst < 1e-6 && hom < 1e-10 && eig < 1e-14 && zero_residual < 1e-12;
    report(
        4,
        "SO(3) SVD oracle",
        pass,
        format!(
            "max relative error {worst:.2e} over n <= 6; zero residual {zero_residual:.1e}; eigenvalue mismatch {eig:.1e}; oracle homomorphism defect {hom:.1e}"
        ),
    );
}

#[test]
fn criterion_05_one_dimensional_oracles() {
    let _g = lock();
    let mut rng = seeded(505);
    let (mut line, mut fixed, mut circle): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..1000 {
        let p = [1.0, 1.5, 2.0, 3.0][rng.random_range(0..4)];
        let (n, m) = (rng.random_range(1..=8), rng.random_range(1..=8));

        let xs: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let ys: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
        let (a, b) = (random_weights(&mut rng, n), random_weights(&mut rng, m));
        let got = wasserstein_1d_pow(&Measure1D::discrete(&xs, &a).unwrap(), &Measure1D::discrete(&ys, &b).unwrap(), p)
            .unwrap();
        let want = lp_transport(&a, &b, |i, j| (xs[i] - ys[j]).abs().powf(p));
        line = line.max((got - want).abs());

        let mut t: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        t.sort_by(f64::total_cmp);
        let (w, v) = (random_weights(&mut rng, n), random_weights(&mut rng, n));
        let (got, _) = fixed_support_1d_value_and_grad(&t, &w, &v, p).unwrap();
        let want = lp_transport(&w, &v, |i, j| (t[i] - t[j]).abs().powf(p));
        fixed = fixed.max((got - want).abs());

        let sa: Vec<f64> = (0..n).map(|_| 2.0 * PI * rng.random::<f64>()).collect();
        let sb: Vec<f64> = (0..m).map(|_| 2.0 * PI * rng.random::<f64>()).collect();
        let got = wasserstein_circle(&CircleMeasure::new(&sa, &a).unwrap(), &CircleMeasure::new(&sb, &b).unwrap(), p)
            .unwrap()
            .powf(p);
        let want = lp_transport(&a, &b, |i, j| {
            let d = (sa[i] - sb[j]).abs();
            d.min(2.0 * PI - d).powf(p)
        });
        circle = circle.max((got - want).abs());
    }
    let pass = line < 1e-9 && fixed < 1e-9 && circle < 1e-9;
    report(
        5,
        "1D OT oracles",
        pass,
        format!("max |error| over 1000 instances: interval {line:.1e}, fixed support {fixed:.1e}, circle {circle:.1e}"),
    );
}

fn rel_err(fd: f64, an: f64) -> f64 {
    (fd - an).abs() / an.abs().max(1e-6)
}

#[test]
fn criterion_06_gradient_checks() {
    let _g = lock();
    let mut rng = seeded(606);
    let h = 1e-5;

    let mut sphere: f64 = 0.0;
    for trial in 0..100u64 {
        let (n, m) = (rng.random_range(2..=12), rng.random_range(2..=12));
        let xp = sample_uniform_sphere(3, n, 10 * trial).unwrap();
        let x = SphereMeasure::new(xp.clone(), random_weights(&mut rng, n)).unwrap();
        let y = random_sphere_measure(&mut rng, m, 10 * trial + 1);
        let dirs: Vec<SliceDirection> =
            sphere_directions(3, 7, 10 * trial + 2).into_iter().map(SliceDirection::Sphere).collect();
        let g = sw_gradient_free(&x, &y, &dirs, SliceKind::Parallel).unwrap();
        let tangents: Vec<Vec<f64>> = xp
            .iter()
            .map(|p| {
                let raw: Vec<f64> = (0..3).map(|_| rng.random::<f64>() - 0.5).collect();
                proj_tangent_sphere(p, &raw).unwrap().vec().to_vec()
            })
            .collect();
        let an: f64 = g.tangents.iter().zip(&tangents).map(|(a, b)| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>()).sum();
        let moved = |s: f64| {
            let pts = xp.iter().zip(&tangents).map(|(p, v)| exp_sphere(p, &v.iter().map(|c| s * c).collect::<Vec<_>>()).unwrap()).collect();
            let xs = SphereMeasure::new(pts, x.weights().to_vec()).unwrap();
            sw_gradient_free(&xs, &y, &dirs, SliceKind::Parallel).unwrap().value
        };
        sphere = sphere.max(rel_err((moved(h) - moved(-h)) / (2.0 * h), an));
    }

    let mut so3: f64 = 0.0;
    for trial in 0..100u64 {
        let (n, m) = (rng.random_range(2..=10), rng.random_range(2..=10));
        let xp = sample_uniform_so3(n, 20 * trial);
        let x = So3Measure::new(xp.clone(), random_weights(&mut rng, n)).unwrap();
        let y = So3Measure::new(sample_uniform_so3(m, 20 * trial + 1), random_weights(&mut rng, m)).unwrap();
        let dirs: Vec<SliceDirection> = so3_directions(7, 20 * trial + 2).into_iter().map(SliceDirection::So3).collect();
        let g = sw_gradient_free(&x, &y, &dirs, SliceKind::So3Trace).unwrap();
        let axes = sample_uniform_sphere(3, n, 20 * trial + 3).unwrap();
        let an: f64 = xp
            .iter()
            .zip(&axes)
            .zip(&g.tangents)
            .map(|((r, a), t)| {
                let c = a.coords();
                let skew = Matrix3::new(0.0, -c[2], c[1], c[2], 0.0, -c[0], -c[1], c[0], 0.0);
                let dir = r.matrix() * skew;
                (0..9).map(|e| t[e] * dir[(e / 3, e % 3)]).sum::<f64>()
            })
            .sum();
        let moved = |s: f64| {
            let pts = xp.iter().zip(&axes).map(|(r, a)| r.compose(&rotation_axis_angle(a, s).unwrap())).collect();
            let xs = So3Measure::new(pts, x.weights().to_vec()).unwrap();
            sw_gradient_free(&xs, &y, &dirs, SliceKind::So3Trace).unwrap().value
        };
        so3 = so3.max(rel_err((moved(h) - moved(-h)) / (2.0 * h), an));
    }

    let mut fixed: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(2..=10);
        let p = 1.0 + 2.0 * rng.random::<f64>();
        let mut t: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        t.sort_by(f64::total_cmp);
        let (w, v) = (random_weights(&mut rng, n), random_weights(&mut rng, n));
        let mut d: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        let mean = d.iter().sum::<f64>() / n as f64;
        d.iter_mut().for_each(|x| *x -= mean);
        let (_, grad) = fixed_support_1d_value_and_grad(&t, &w, &v, p).unwrap();
        let an: f64 = grad.iter().zip(&d).map(|(g, e)| g * e).sum();
        let at = |s: f64| {
            let ws: Vec<f64> = w.iter().zip(&d).map(|(a, e)| a + s * e).collect();
            fixed_support_1d_value_and_grad(&t, &ws, &v, p).unwrap().0
        };
        fixed = fixed.max(rel_err((at(h) - at(-h)) / (2.0 * h), an));
    }
    let pass = sphere < 1e-4 && so3 < 1e-4 && fixed < 1e-4;
    report(
        6,
        "gradient checks",
        pass,
        format!("max relative FD error over 100 instances: sphere {sphere:.1e}, SO(3) {so3:.1e}, fixed support {fixed:.1e}"),
    );
}

#[test]
fn criterion_07_metric_and_invariance() {
    let _g = lock();
    let mut rng = seeded(707);
    let p = 2.0;
    let mut rot: f64 = 0.0;
    let mut left: f64 = 0.0;
    let mut symmetric = true;
    let mut triangle: f64 = f64::NEG_INFINITY;
    for trial in 0..10u64 {
        let mu = random_sphere_measure(&mut rng, 30, 100 * trial);
        let nu = random_sphere_measure(&mut rng, 25, 100 * trial + 1);
        let eta = random_sphere_measure(&mut rng, 20, 100 * trial + 2);
        let q = random_rotation(&mut rng);
        let turn = |m: &SphereMeasure| m.map_points(|x| q.rotate(x).unwrap());
        let dirs = sphere_directions(3, 300, 100 * trial + 3);
        let turned: Vec<UnitVector> = dirs.iter().map(|d| q.rotate(d).unwrap()).collect();
        let base = psw_with_directions(&mu, &nu, &dirs, p).unwrap();
        let moved = psw_with_directions(&turn(&mu), &turn(&nu), &turned, p).unwrap();
        rot = rot.max((base.raw_pth_power - moved.raw_pth_power).abs());
        symmetric &= base == psw_with_directions(&nu, &mu, &dirs, p).unwrap();

        let b = SliceBudget::new(300, 100 * trial + 4, p).unwrap();
        let (ab, bc, ac) = (psw(&mu, &nu, &b).unwrap(), psw(&nu, &eta, &b).unwrap(), psw(&mu, &eta, &b).unwrap());
        let se = |e: &slicedot::distances::DistanceEstimate| e.stderr / (2.0 * e.value.max(1e-12));
        let slack = 3.0 * (se(&ab).powi(2) + se(&bc).powi(2) + se(&ac).powi(2)).sqrt();
        triangle = triangle.max(ac.value - ab.value - bc.value - slack);

        let r1 = So3Measure::new(sample_uniform_so3(20, 100 * trial + 5), random_weights(&mut rng, 20)).unwrap();
        let r2 = So3Measure::new(sample_uniform_so3(15, 100 * trial + 6), random_weights(&mut rng, 15)).unwrap();
        let r3 = So3Measure::new(sample_uniform_so3(10, 100 * trial + 7), random_weights(&mut rng, 10)).unwrap();
        let g0 = random_rotation(&mut rng);
        let shift = |m: &So3Measure| m.map_points(|r| g0.compose(r));
        let sdirs = so3_directions(300, 100 * trial + 8);
        let sturned: Vec<Rotation> = sdirs.iter().map(|d| g0.compose(d)).collect();
        let base = sosw_with_directions(&r1, &r2, &sdirs, p).unwrap();
        let moved = sosw_with_directions(&shift(&r1), &shift(&r2), &sturned, p).unwrap();
        left = left.max((base.raw_pth_power - moved.raw_pth_power).abs());
        symmetric &= base == sosw_with_directions(&r2, &r1, &sdirs, p).unwrap();
        let (ab, bc, ac) = (sosw(&r1, &r2, &b).unwrap(), sosw(&r2, &r3, &b).unwrap(), sosw(&r1, &r3, &b).unwrap());
        let slack = 3.0 * (se(&ab).powi(2) + se(&bc).powi(2) + se(&ac).powi(2)).sqrt();
        triangle = triangle.max(ac.value - ab.value - bc.value - slack);
    }
    let pass = rot < 1e-12 && left < 1e-12 && symmetric && triangle <= 0.0;
    report(
        7,
        "metric and invariance",
        pass,
        format!(
            "PSW rotation defect {rot:.1e}, SOSW left-translation defect {left:.1e}, symmetry exact: {symmetric}, worst triangle excess over 3 stderr {triangle:.3}"
        ),
    );
}

#[test]
fn criterion_08_quaternion_equivalence() {
    let _g = lock();
    let mut rng = seeded(808);
    let mut worst: f64 = 0.0;
    for trial in 0..10u64 {
        let mu = So3Measure::new(sample_uniform_so3(50, 10 * trial), random_weights(&mut rng, 50)).unwrap();
        let nu = So3Measure::new(sample_uniform_so3(50, 10 * trial + 1), random_weights(&mut rng, 50)).unwrap();
        let a = sosw(&mu, &nu, &SliceBudget::new(5000, 10 * trial + 2, 2.0).unwrap()).unwrap();
        let b = sosw_via_s3(&mu, &nu, &SliceBudget::new(5000, 10 * trial + 3, 2.0).unwrap()).unwrap();
        worst = worst.max((a.raw_pth_power - b.raw_pth_power).abs() / a.stderr.hypot(b.stderr));
    }
    report(8, "quaternion equivalence", worst <= 3.0, format!("max difference {worst:.2} combined stderr over 10 pairs"));
}

fn rel_l2(grid: &SphereGrid, a: &[f64], b: &[f64]) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).collect();
    let norm: Vec<f64> = b.iter().map(|y| y * y).collect();
    (grid.integrate(&diff) / grid.integrate(&norm)).sqrt()
}

#[test]
fn criterion_09_radon_barycenter() {
    let _g = lock();
    let start = Instant::now();
    let cfg = RadonBarycenterConfig::new(32);
    let grid = &cfg.grid;
    let pts = grid.points();

    // Positive input of degree 30.
    let c1 = UnitVector::normalize(vec![0.3, -0.4, 0.8]).unwrap();
    let c2 = UnitVector::normalize(vec![-0.7, 0.1, -0.2]).unwrap();
    let bump = |c: &UnitVector, x: &[f64; 3], k: i32| (1.0 + (0..3).map(|i| c.coords()[i] * x[i]).sum::<f64>()).powi(k) / 2f64.powi(k);
    let f: Vec<f64> = pts.iter().map(|x| bump(&c1, x, 30) + 0.5 * bump(&c2, x, 12) + 0.01).collect();
    let out = barycenter_radon(&[f.clone()], &[1.0], &cfg).unwrap();
    let mass = grid.integrate(&f);
    let unit: Vec<f64> = f.iter().map(|v| v / mass).collect();
    let identity = rel_l2(grid, &out.density, &unit);

    // Antipodal vMF inputs; band mass measured on a fine ring grid.
    let vmf = |z: f64| {
        let params = VmfParams::new(UnitVector::normalize(vec![0.0, 0.0, z]).unwrap(), 50.0).unwrap();
        pts.iter().map(|x| vmf_density(&params, x).unwrap()).collect::<Vec<f64>>()
    };
    let ring = barycenter_radon(&[vmf(1.0), vmf(-1.0)], &[0.5, 0.5], &cfg).unwrap();
    let fine = SphereGrid::new(400, 2 * cfg.degree + 2).unwrap();
    let dens: Vec<f64> = sht_inverse(&ring.coeffs, &fine).into_iter().map(|v| v.max(0.0)).collect();
    let band: Vec<f64> = fine.points().iter().zip(&dens).map(|(x, v)| if x[2].abs() < 0.3 { *v } else { 0.0 }).collect();
    let band_mass = fine.integrate(&band) / fine.integrate(&dens);
    let secs = start.elapsed().as_secs_f64();
    let pass = identity < 1e-3 && band_mass >= 0.6 && secs < 120.0;
    report(
        9,
        "Radon barycenter",
        pass,
        format!(
            "single-input relative L2 error {identity:.2e}; antipodal vMF band mass in |xi3| < 0.3 is {band_mass:.3} (uniform 0.300, need >= 0.6); {secs:.1} s"
        ),
    );
}

#[test]
fn criterion_10_speed() {
    let _g = lock();
    let (slices, iters, seed) = (200, 10, 1010);
    let psb = |n: usize, dim: usize| time_barycenter(BenchKind::Psw, n, dim, slices, iters, seed).unwrap().median_seconds;
    let ssb = time_barycenter(BenchKind::Ssw, 1000, 3, slices, iters, seed).unwrap().median_seconds;
    let at_1000 = psb(1000, 3);
    let speedup = ssb / at_1000;
    let sizes = [500.0, 1000.0, 2000.0, 5000.0];
    let times: Vec<f64> = sizes.iter().map(|n| psb(*n as usize, 3)).collect();
    let slope = loglog_slope(&sizes, &times).unwrap();
    let growth = psb(1000, 50) / at_1000;
    let pass = speedup >= 5.0 && (0.9..=1.3).contains(&slope) && growth < 2.0;
    report(
        10,
        "speed",
        pass,
        format!(
            "PSB {:.2} ms vs SSB {:.2} ms per step at N = 1000 ({speedup:.1}x); slope in N {slope:.3}; d = 50 over d = 3 {growth:.2}x",
            1e3 * at_1000 / iters as f64,
            1e3 * ssb / iters as f64
        ),
    );
}

#[test]
fn criterion_11_convergence() {
    let _g = lock();
    let (n, slices, iters) = (200, 500, 1000);
    let a = vmf_sample(&VmfParams::new(UnitVector::basis(3, 2), 100.0).unwrap(), n, 1101).unwrap();
    let b = vmf_sample(&VmfParams::new(UnitVector::basis(3, 0), 100.0).unwrap(), n, 1102).unwrap();
    let init = SphereMeasure::uniform(sample_uniform_sphere(3, n, 1103).unwrap()).unwrap();
    let cfg = SgdConfig::new(iters, slices, StepSchedule::Constant { tau: 40.0 }, 1104).unwrap();
    let run = barycenter_free_sphere(&[a.clone(), b.clone()], &[0.5, 0.5], &init, &cfg).unwrap();
    let loss = &run.loss;

    let blocks: Vec<(f64, f64)> = loss
        .chunks(100)
        .map(|c| {
            let m = c.iter().sum::<f64>() / c.len() as f64;
            let var = c.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (c.len() - 1) as f64;
            (m, (var / c.len() as f64).sqrt())
        })
        .collect();
    let monotone = blocks.windows(2).all(|w| w[1].0 <= w[0].0 + 3.0 * w[0].1.hypot(w[1].1));
    let initial = loss[0];
    let last = blocks.last().unwrap().0;
    let ratio = last / initial;

    // Per slice ½|x − a|² + ½|x − b|² ≥ ¼|a − b|², so no iterate can go below
    // ¼ SW₂²(a, b).
    let floor = 0.25 * psw(&a, &b, &SliceBudget::new(20_000, 1105, 2.0).unwrap()).unwrap().raw_pth_power;
    let pass = monotone && ratio < 0.25;
    let means: Vec<String> = blocks.iter().map(|(m, _)| format!("{m:.4}")).collect();
    report(
        11,
        "convergence",
        pass,
        format!(
            "block means [{}], monotone within 3 stderr: {monotone}; final/initial {ratio:.3} (need < 0.25); attainable floor/initial {:.3}",
            means.join(", "),
            floor / initial
        ),
    );
}
