mod common;

use common::real_sh;
use curvflow::s2core::*;
use proptest::prelude::*;

#[test]
fn synthesis_matches_independent_harmonics() {
    let grid = S2Grid::new(8).unwrap();
    let c = random_band_limited(7, RandomModes { allow_low_modes: true, ..RandomModes::new(0, 8, 1.0) }, 8).unwrap();
    let values = grid.synthesize(&c, Derivative::Value).unwrap();
    for i in 0..grid.n_theta() {
        for j in 0..grid.n_phi() {
            let direct: f64 = c.iter().map(|(l, m, a)| a * real_sh(l, m, grid.theta(i), grid.phi(j))).sum();
            assert!((values[grid.node_index(i, j)] - direct).abs() <= 1e-12);
        }
    }
}

#[test]
fn analysis_matches_double_loop_quadrature() {
    let grid = S2Grid::new(8).unwrap();
    let c = random_band_limited(7, RandomModes { allow_low_modes: true, ..RandomModes::new(0, 8, 1.0) }, 8).unwrap();
    let values = grid.synthesize(&c, Derivative::Value).unwrap();
    let fast = grid.analyze(&values).unwrap();
    let weights = grid.weights();
    for (l, m, a) in c.iter() {
        let mut acc = 0.0;
        for i in 0..grid.n_theta() {
            for j in 0..grid.n_phi() {
                let k = grid.node_index(i, j);
                acc += weights[k] * values[k] * real_sh(l, m, grid.theta(i), grid.phi(j));
            }
        }
        assert!((acc - a).abs() <= 1e-10, "({l},{m}) quadrature {acc} vs {a}");
        assert!((fast.get(l, m) - a).abs() <= 1e-10);
    }
}

#[test]
fn partials_match_finite_differences() {
    let grid = S2Grid::new(8).unwrap();
    let c = ShCoeffs::single_mode(8, 3, 2, 1.0).unwrap();
    let dtheta = grid.synthesize(&c, Derivative::Theta).unwrap();
    let dphi = grid.synthesize(&c, Derivative::Phi).unwrap();
    let step = 1e-4;
    for i in 0..grid.n_theta() {
        for j in 0..grid.n_phi() {
            let (t, p) = (grid.theta(i), grid.phi(j));
            let ft = (real_sh(3, 2, t + step, p) - real_sh(3, 2, t - step, p)) / (2.0 * step);
            let fp = (real_sh(3, 2, t, p + step) - real_sh(3, 2, t, p - step)) / (2.0 * step);
            let k = grid.node_index(i, j);
            assert!((dtheta[k] - ft).abs() <= 1e-6);
            assert!((dphi[k] - fp).abs() <= 1e-6);
        }
    }
}

#[test]
fn integral_of_constant_and_single_modes() {
    let grid = S2Grid::new(12).unwrap();
    let ones = vec![1.0; grid.len()];
    assert!((grid.integrate(&ones).unwrap() - 4.0 * std::f64::consts::PI).abs() <= 1e-13);
    let y = grid.synthesize(&ShCoeffs::single_mode(12, 5, -3, 1.0).unwrap(), Derivative::Value).unwrap();
    assert!(grid.integrate(&y).unwrap().abs() <= 1e-13);
    let sq: Vec<f64> = y.iter().map(|v| v * v).collect();
    assert!((grid.integrate(&sq).unwrap() - 1.0).abs() <= 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn analysis_inverts_synthesis(seed in any::<u64>(), l in 2usize..12) {
        let grid = S2Grid::new(l).unwrap();
        let c = random_band_limited(seed, RandomModes { allow_low_modes: true, ..RandomModes::new(0, l, 1.0) }, l).unwrap();
        let back = grid.analyze(&grid.synthesize(&c, Derivative::Value).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&c) <= 1e-11);
    }

    #[test]
    fn laplacian_is_nonpositive(seed in any::<u64>()) {
        let c = random_band_limited(seed, RandomModes::new(2, 8, 1.0), 8).unwrap();
        let lap = c.laplace_beltrami();
        let dot: f64 = c.as_slice().iter().zip(lap.as_slice()).map(|(a, b)| a * b).sum();
        prop_assert!(dot <= -6.0 * c.norm_sq() * (1.0 - 1e-12));
    }

    #[test]
    fn random_coefficients_are_deterministic(seed in any::<u64>()) {
        let a = random_band_limited(seed, RandomModes::new(2, 6, 0.1), 8).unwrap();
        let b = random_band_limited(seed, RandomModes::new(2, 6, 0.1), 8).unwrap();
        prop_assert_eq!(a, b);
    }
}
