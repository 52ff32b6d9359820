mod common;

use std::f64::consts::PI;

use common::{real_sh, simpson};
use curvflow::s2core::{random_band_limited, RandomModes};
use curvflow::surface::{BallUnion, RadialSurface};
use curvflow::vpmcf::*;
use proptest::prelude::*;

/// Derivative of the `(2,0)` coefficient after one step with respect to the
/// `(2,0)` coefficient before it, by central differences about the ball.
fn l2_multiplier(step: impl Fn(&RadialSurface) -> RadialSurface, eps: f64) -> f64 {
    let plus = step(&RadialSurface::from_mode(16, 2, 0, eps).unwrap());
    let minus = step(&RadialSurface::from_mode(16, 2, 0, -eps).unwrap());
    (plus.coeffs.get(2, 0) - minus.coeffs.get(2, 0)) / (2.0 * eps)
}

#[test]
fn concentric_ball_dissipation() {
    let e = RadialSurface::unit_sphere(8);
    let inner = 4.0 * PI * simpson(0.9, 1.0, 200, |s| (1.0 - s) * s * s);
    let outer = 4.0 * PI * simpson(1.0, 1.1, 200, |s| (s - 1.0) * s * s);
    let d_in = dissipation(&e.scaled(0.9), &e, DEFAULT_RADIAL_NODES).unwrap();
    let d_out = dissipation(&e.scaled(1.1), &e, DEFAULT_RADIAL_NODES).unwrap();
    assert!((d_in - inner).abs() <= 1e-8 * inner);
    assert!((d_in - 0.054768).abs() <= 1e-6);
    assert!((d_out - outer).abs() <= 1e-8 * outer);
    assert_eq!(dissipation(&e, &e, DEFAULT_RADIAL_NODES).unwrap(), 0.0);
}

#[test]
fn mm_linearization_about_the_ball() {
    // w_F − w_E = −h(l−1)(l+2)w_F for the l = 2 mode
    let cfg = MmConfig::default();
    let mu = l2_multiplier(|s| mm_step(s, &cfg).unwrap().0, 1e-4);
    let expected = 1.0 / (1.0 + 4.0 * cfg.h);
    assert!((mu - expected).abs() <= 1e-3 * expected, "multiplier {mu} vs {expected}");
}

#[test]
fn direct_step_decay_factor() {
    let dt = 1e-3;
    let e = RadialSurface::from_mode(16, 2, 0, 1e-3).unwrap();
    let f = direct_step(&e, dt).unwrap();
    let factor = f.coeffs.get(2, 0) / e.coeffs.get(2, 0);
    let expected = (-4.0 * dt).exp();
    assert!(((1.0 - factor) - (1.0 - expected)).abs() <= 0.1 * (1.0 - expected));
    let mu = l2_multiplier(|s| direct_step(s, dt).unwrap(), 1e-4);
    assert!((mu - 1.0 / (1.0 + 4.0 * dt)).abs() <= 1e-8, "{mu}");
    // the finite amplitude adds a quadratic correction
    assert!((mu - factor).abs() <= 1e-5, "{mu} vs {factor}");
}

#[test]
fn mm_agrees_with_direct_as_h_shrinks() {
    let e = RadialSurface::from_mode(16, 2, 0, 0.1).unwrap().normalize().unwrap();
    let deviations: Vec<f64> = [0.02, 0.01, 0.005]
        .iter()
        .map(|&h| {
            let (f, _) = mm_step(&e, &MmConfig { h, ..MmConfig::default() }).unwrap();
            f.coeffs.max_abs_diff(&direct_step(&e, h).unwrap().coeffs)
        })
        .collect();
    assert!(deviations[1] <= 0.75 * deviations[0], "{deviations:?}");
    assert!(deviations[2] <= 0.75 * deviations[1], "{deviations:?}");
}

#[test]
fn mm_step_on_perturbed_ball() {
    let e = RadialSurface::from_mode(16, 2, 0, 0.1).unwrap().normalize().unwrap();
    let cfg = MmConfig::default();
    let (_, diag) = mm_step(&e, &cfg).unwrap();
    assert!(diag.perimeter_after < diag.perimeter_before);
    assert!(diag.perimeter_after + diag.dissipation / cfg.h <= diag.perimeter_before + 1e-8);
    assert!(diag.el_residual <= 0.05 / cfg.h * 1e-3);
    assert!(diag.volume_drift.abs() <= 1e-12);
}

#[test]
fn hausdorff_matches_brute_force() {
    let s = RadialSurface::from_mode(16, 2, 0, 0.1).unwrap();
    let target = BallUnion::new(vec![[0.0; 3]], 1.0);
    let n = 2000;
    let brute = (0..=n)
        .map(|i| (0.1 * real_sh(2, 0, PI * i as f64 / n as f64, 0.0)).abs())
        .fold(0.0, f64::max);
    let grid = hausdorff_to_union(&[s.clone()], &target, Sampling::Grid).unwrap();
    let random = hausdorff_to_union(&[s], &target, Sampling::default()).unwrap();
    assert!(grid <= brute + 1e-12);
    assert!((random - brute).abs() <= 1e-4, "{random} vs {brute}");
}

#[test]
fn short_mixed_run_ledger() {
    let c = random_band_limited(3, RandomModes::new(2, 4, 0.1), 16).unwrap();
    let e0 = RadialSurface::new([0.0; 3], c).normalize().unwrap();
    let trace = run(&e0, &MmConfig::default(), 0.3, Scheme::Mm).unwrap();
    let v0 = trace.entries[0].report.volume;
    let drift = trace.entries.iter().map(|e| ((e.report.volume - v0) / v0).abs()).fold(0.0, f64::max);
    assert!(drift <= 1e-7);
    let ledger = dissipation_ledger(&trace, 1e-8);
    assert!(ledger.comparison_holds && ledger.telescoping_holds);
    assert!(ledger.empirical_distance_constant.is_finite());
    assert!(trace.entries.windows(2).all(|w| w[1].report.perimeter <= w[0].report.perimeter + 1e-9));

    // tail domination with the empirical constant, then the geometric tail bound
    let d: Vec<f64> = ledger.rows.iter().map(|r| r.dissipation).collect();
    let mut tail = 0.0;
    let mut c = 1.0f64 + 1e-9;
    for v in d.iter().rev() {
        tail += v;
        c = c.max(tail / v);
    }
    let check = geometric_decay_check(&d, c * (1.0 + 1e-9)).unwrap();
    assert!(check.passed());
}

#[test]
fn fitted_rate_with_small_step() {
    let e0 = RadialSurface::from_mode(16, 2, 0, 0.1).unwrap().normalize().unwrap();
    let trace = run(&e0, &MmConfig { h: 0.005, ..MmConfig::default() }, 0.6, Scheme::Mm).unwrap();
    let fit = fit_rate(&trace, Observable::PerimeterDeficit).unwrap();
    assert!((fit.rate + 8.0).abs() <= 0.3 * 8.0, "rate {}", fit.rate);
    assert!(fit.r_squared.unwrap() >= 0.95);
}

#[test]
fn decay_check_witness() {
    let a: Vec<f64> = (0..40).map(|k| 0.5f64.powi(k)).collect();
    assert!(geometric_decay_check(&a, 2.0).unwrap().passed());
    let ones = geometric_decay_check(&[1.0; 5], 2.0).unwrap();
    assert_eq!(ones.first_violation, Some(0));
    assert!(geometric_decay_check(&a, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dissipation_grows_with_dilation(a in 0.02f64..0.2, b in 0.02f64..0.2) {
        let e = RadialSurface::unit_sphere(8);
        let (small, large) = (a.min(b), a.max(b));
        let d_small = dissipation(&e.scaled(1.0 + small), &e, DEFAULT_RADIAL_NODES).unwrap();
        let d_large = dissipation(&e.scaled(1.0 + large), &e, DEFAULT_RADIAL_NODES).unwrap();
        prop_assert!(d_small > 0.0);
        prop_assert!(d_small <= d_large * (1.0 + 1e-12));
    }

    #[test]
    fn geometric_sequences_pass(q in 0.05f64..0.6, n in 2usize..40) {
        let a: Vec<f64> = (0..n).map(|k| q.powi(k as i32)).collect();
        let c = 1.0 / (1.0 - q);
        prop_assert!(geometric_decay_check(&a, c * (1.0 + 1e-9)).unwrap().passed());
    }
}
