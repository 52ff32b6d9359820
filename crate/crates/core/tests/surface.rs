mod common;

use std::f64::consts::PI;

use common::{real_sh, rel, revolution, revolution_curvatures};
use curvflow::s2core::{S2Grid, ShCoeffs};
use curvflow::surface::*;
use proptest::prelude::*;

fn y20(theta: f64) -> f64 {
    real_sh(2, 0, theta, 0.0)
}

#[test]
fn mean_curvature_matches_finite_differences() {
    let s = RadialSurface::from_mode(16, 2, 0, 0.1).unwrap();
    let grid = s.grid().unwrap();
    let cf = curvature_fields(&s, &grid).unwrap();
    let rho = |t: f64| 1.0 + 0.1 * y20(t);
    let mut worst = 0.0f64;
    for i in 0..grid.n_theta() {
        let (k1, k2, _) = revolution_curvatures(&rho, grid.theta(i));
        for j in 0..grid.n_phi() {
            worst = worst.max((cf.mean[grid.node_index(i, j)] - (k1 + k2)).abs());
        }
    }
    assert!(worst <= 1e-6, "sup deviation {worst:e}");
}

#[test]
fn report_matches_dense_quadrature() {
    // ρ = 1 + 0.2cos²θ = 1 + (0.2/3)·√(4π)·Y₀₀ + (0.4/3)/√(5/4π)·Y₂₀
    let mut c = ShCoeffs::zeros(16);
    c.set(0, 0, 0.2 / 3.0 * (4.0 * PI).sqrt());
    c.set(2, 0, 0.4 / 3.0 / (5.0 / (4.0 * PI)).sqrt());
    let s = RadialSurface::new([0.0; 3], c);
    let r = report(&s).unwrap();
    let o = revolution(|t: f64| 1.0 + 0.2 * t.cos().powi(2), 4096);
    let hbar = o.total_mean / o.perimeter;
    let osc = o.mean_sq - o.total_mean * o.total_mean / o.perimeter;
    assert!(rel(r.perimeter, o.perimeter) <= 1e-6);
    assert!(rel(r.volume, o.volume) <= 1e-6);
    assert!(rel(r.volume_divergence, o.volume) <= 1e-6);
    assert!(rel(r.hbar, hbar) <= 1e-6);
    assert!(rel(r.osc, osc) <= 1e-6);
    assert!(rel(r.mean_curvature_sq, o.mean_sq) <= 1e-6);
    assert!(rel(r.willmore, 0.25 * o.mean_sq) <= 1e-6);
    assert!(rel(r.traceless_energy, o.traceless) <= 1e-6);
    assert!(rel(r.total_gauss_curvature, o.total_gauss) <= 1e-6);
    assert!(rel(o.total_gauss, 4.0 * PI) <= 1e-6);
    assert!(r.barycenter.iter().all(|x| x.abs() <= 1e-12));
}

#[test]
fn cmc_deficit_matches_dense_oracle() {
    let s = RadialSurface::from_mode(16, 2, 0, 0.1).unwrap();
    let d = cmc_deficit(&s).unwrap();
    let rho = |t: f64| 1.0 + 0.1 * y20(t);
    let o = revolution(rho, 4096);
    let h0 = 2.0 * o.perimeter / (3.0 * o.volume);
    let grid = s.grid().unwrap();
    let delta = (0..grid.n_theta())
        .map(|i| {
            let (k1, k2, _) = revolution_curvatures(&rho, grid.theta(i));
            ((k1 + k2) / h0 - 1.0).abs()
        })
        .fold(0.0, f64::max);
    assert!(rel(d.h0, h0) <= 1e-6);
    assert!((d.delta - delta).abs() <= 1e-6);
    assert!(d.delta > 0.0);
}

#[test]
fn normalize_hits_unit_volume() {
    let s = RadialSurface::from_mode(16, 3, 1, 0.15).unwrap().normalize().unwrap();
    assert!((report(&s).unwrap().volume - UNIT_BALL_VOLUME).abs() <= 1e-10);
    assert!(s.is_normalized(1e-10).unwrap());
}

#[test]
fn signed_distance_matches_brute_force() {
    let s = RadialSurface::from_mode(16, 2, 0, 0.1).unwrap();
    let p = [0.0, 0.0, 1.5];
    let n = 2048;
    let mut best = f64::INFINITY;
    for i in 0..=n {
        let t = PI * i as f64 / n as f64;
        let r = 1.0 + 0.1 * y20(t);
        for j in 0..n {
            let f = 2.0 * PI * j as f64 / n as f64;
            let x = [r * t.sin() * f.cos(), r * t.sin() * f.sin(), r * t.cos()];
            let d = ((x[0] - p[0]).powi(2) + (x[1] - p[1]).powi(2) + (x[2] - p[2]).powi(2)).sqrt();
            best = best.min(d);
        }
    }
    let d = s.signed_distance(p).unwrap();
    assert!((d - best).abs() <= 1e-5, "{d} vs {best}");
    assert!(s.signed_distance([0.0, 0.0, 0.5]).unwrap() < 0.0);
}

#[test]
fn j_epsilon_exceeds_ball_value() {
    let ball = RadialSurface::unit_sphere(16);
    let s = RadialSurface::from_mode(16, 2, 0, 0.05).unwrap().normalize().unwrap();
    assert!(j_epsilon(&s, 0.01).unwrap() > j_epsilon(&ball, 0.01).unwrap());
    let big = RadialSurface::unit_sphere(16).scaled(1.1);
    assert!(matches!(j_epsilon(&big, 0.01), Err(curvflow::Error::NotNormalized { .. })));
}

#[test]
fn meshes_obey_gauss_bonnet() {
    let ico = TriMesh::icosphere(4);
    assert_eq!(ico.genus(), 0);
    let k = mesh_curvatures(&ico);
    assert!((k.angle_deficit.iter().sum::<f64>() - 4.0 * PI).abs() <= 1e-9);
    let w = mesh_report(&ico).willmore;
    assert!(rel(w, 4.0 * PI) <= 0.01);

    let torus = TriMesh::torus(2.0, 0.5, 48, 24).unwrap();
    assert_eq!(torus.genus(), 1);
    let k = mesh_curvatures(&torus);
    assert!(k.angle_deficit.iter().sum::<f64>().abs() <= 1e-9);
}

#[test]
fn two_perturbed_balls_are_detected() {
    let r = 0.5f64.cbrt();
    let a = RadialSurface::from_mode(16, 2, 0, 0.002).unwrap().scaled(r).translated([-1.2, 0.0, 0.0]);
    let b = RadialSurface::from_mode(16, 3, 1, 0.002).unwrap().scaled(r).translated([1.2, 0.0, 0.0]);
    let balls = detect_ball_configuration(&[a.clone(), b.clone()], DEFAULT_CMC_THRESHOLD).unwrap();
    assert_eq!(balls.len(), 2);
    for (s, c) in [a, b].iter().zip(&balls.centers) {
        let bary = report(s).unwrap().barycenter;
        assert!((0..3).all(|k| (bary[k] - c[k]).abs() <= 1e-3));
    }
}

#[test]
fn star_shape_violation_is_reported() {
    let s = RadialSurface::from_mode(16, 2, 0, -2.0).unwrap();
    let grid = S2Grid::new(16).unwrap();
    assert!(matches!(s.check_star_shaped(&grid), Err(curvflow::Error::NotStarShaped { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn radial_and_divergence_volumes_agree(seed in any::<u64>(), amp in 0.0f64..0.2) {
        use curvflow::s2core::{random_band_limited, RandomModes};
        let c = random_band_limited(seed, RandomModes::new(2, 6, amp), 16).unwrap();
        let r = report(&RadialSurface::new([0.0; 3], c)).unwrap();
        prop_assert!(rel(r.volume, r.volume_divergence) <= 1e-8);
        prop_assert!(rel(r.total_gauss_curvature, 4.0 * PI) <= 1e-6);
        prop_assert!(r.willmore >= 4.0 * PI * (1.0 - 1e-9));
    }

    #[test]
    fn dilation_scales_perimeter_and_volume(alpha in 0.5f64..2.0) {
        let s = RadialSurface::from_mode(16, 3, 2, 0.1).unwrap();
        let (a, b) = (report(&s).unwrap(), report(&s.scaled(alpha)).unwrap());
        prop_assert!(rel(b.perimeter, alpha * alpha * a.perimeter) <= 1e-12);
        prop_assert!(rel(b.volume, alpha.powi(3) * a.volume) <= 1e-12);
        prop_assert!(rel(b.willmore, a.willmore) <= 1e-10);
    }
}
