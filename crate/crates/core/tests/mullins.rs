use std::f64::consts::PI;

use curvflow::mullins::*;
use curvflow::surface::{BallUnion, RadialSurface};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ball(center: [f64; 3], radius: f64) -> RadialSurface {
    RadialSurface::sphere(center, radius, 16)
}

fn perturbed(center: [f64; 3], radius: f64, amp: f64) -> RadialSurface {
    let mut s = RadialSurface::from_mode(16, 2, 0, amp).unwrap().scaled(radius);
    s.center = center;
    s
}

/// Rolls a grid field by `shift` voxels along the first axis.
fn roll_x(grid: &TorusGrid, values: &[f64], shift: usize) -> Vec<f64> {
    let n = grid.n();
    let mut out = vec![0.0; values.len()];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[grid.index((i + shift) % n, j, k)] = values[grid.index(i, j, k)];
            }
        }
    }
    out
}

/// Zero-mean field built from a handful of random Fourier modes.
fn random_rhs(grid: &TorusGrid, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<([f64; 3], f64, f64)> = (0..6)
        .map(|_| {
            let k = [rng.gen_range(-4..=4) as f64, rng.gen_range(-4..=4) as f64, rng.gen_range(1..=4) as f64];
            (k, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    let n = grid.n();
    let mut v = vec![0.0; grid.len()];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let x = [i as f64, j as f64, k as f64].map(|c| c * grid.spacing());
                v[grid.index(i, j, k)] = modes
                    .iter()
                    .map(|(kv, a, p)| a * (2.0 * PI / grid.side() * (kv[0] * x[0] + kv[1] * x[1] + kv[2] * x[2]) + p).cos())
                    .sum();
            }
        }
    }
    let mean = grid.mean(&v);
    v.iter_mut().for_each(|x| *x -= mean);
    v
}

#[test]
fn poisson_single_mode_at_n64() {
    let grid = TorusGrid::new(8.0, 64).unwrap();
    let rhs: Vec<f64> = (0..grid.len())
        .map(|idx| {
            let i = idx / (64 * 64);
            (2.0 * PI * i as f64 * grid.spacing() / 8.0).cos()
        })
        .collect();
    let u = poisson_solve(&grid, &rhs).unwrap();
    let scale = (8.0 / (2.0 * PI)).powi(2);
    let err = u.values.iter().zip(&rhs).map(|(a, b)| (a - scale * b).abs()).fold(0.0, f64::max);
    assert!(err <= 1e-10 * scale, "max error {err:e}");
    assert!(u.residual <= 1e-10);
}

#[test]
fn poisson_energy_matches_integration_by_parts() {
    // ∫|DU|² = ∫U·(−ΔU) = ∫U·rhs, summed in real space
    let grid = TorusGrid::new(8.0, 64).unwrap();
    for seed in 0..3 {
        let rhs = random_rhs(&grid, seed);
        let u = poisson_solve(&grid, &rhs).unwrap();
        let by_parts: f64 = grid.integrate(&u.values.iter().zip(&rhs).map(|(a, b)| a * b).collect::<Vec<_>>());
        assert!((u.energy - by_parts).abs() <= 1e-9 * by_parts, "{} vs {}", u.energy, by_parts);
        assert!(u.residual <= 1e-10);
        assert!(u.mean().abs() <= 1e-12 * u.sup_norm());
    }
}

#[test]
fn hminus1_of_zero_is_zero() {
    let grid = TorusGrid::new(4.0, 32).unwrap();
    assert_eq!(hminus1_norm(&grid, &vec![0.0; grid.len()]).unwrap(), 0.0);
}

#[test]
fn rasterized_unit_ball_volume() {
    let grid = TorusGrid::new(8.0, 128).unwrap();
    let chi = rasterize_uncorrected(&[ball([4.0; 3], 1.0)], &grid).unwrap();
    let exact = 4.0 * PI / 3.0;
    assert!((chi.mass() - exact).abs() <= 1e-4 * exact, "mass {}", chi.mass());
    assert!(chi.occupancy.iter().all(|o| (0.0..=1.0).contains(o)));
}

#[test]
fn disjoint_balls_add_mass() {
    let grid = TorusGrid::new(8.0, 64).unwrap();
    let a = ball([2.5, 4.0, 4.0], 1.0);
    let b = ball([5.5, 4.0, 4.0], 1.0);
    let both = rasterize_uncorrected(&[a.clone(), b.clone()], &grid).unwrap().mass();
    let sum = rasterize_uncorrected(&[a], &grid).unwrap().mass() + rasterize_uncorrected(&[b], &grid).unwrap().mass();
    assert!((both - sum).abs() <= 1e-8 * sum);
}

#[test]
fn ball_union_rasterizes_to_its_volume() {
    let grid = TorusGrid::new(8.0, 64).unwrap();
    let balls = BallUnion::equisize(vec![[2.5, 4.0, 4.0], [5.5, 4.0, 4.0]]);
    let chi = rasterize_balls(&balls, &grid).unwrap();
    assert!(chi.mass_error() <= 1e-8);
    assert!((chi.mass() - 4.0 * PI / 3.0).abs() <= 1e-3);
}

#[test]
fn overlapping_components_collide() {
    let grid = TorusGrid::new(8.0, 64).unwrap();
    let r = rasterize(&[ball([3.5, 4.0, 4.0], 1.0), ball([4.5, 4.0, 4.0], 1.0)], &grid);
    assert!(matches!(r, Err(curvflow::Error::Collision { .. })));
}

#[test]
fn one_voxel_shift_dissipation() {
    let grid = TorusGrid::new(8.0, 64).unwrap();
    let e = rasterize(&[ball([4.0; 3], 1.0)], &grid).unwrap();
    let mut f = e.clone();
    f.occupancy = roll_x(&grid, &e.occupancy, 1);
    let h = 0.01;
    let (d, u) = ms_dissipation(&f, &e, h).unwrap();
    assert!(d > 0.0);

    let rhs: Vec<f64> = f.occupancy.iter().zip(&e.occupancy).map(|(a, b)| (a - b) / h).collect();
    let by_parts = grid.integrate(&u.values.iter().zip(&rhs).map(|(a, b)| a * b).collect::<Vec<_>>());
    assert!((d - by_parts).abs() <= 1e-8 * d, "{d} vs {by_parts}");

    let diff: Vec<f64> = f.occupancy.iter().zip(&e.occupancy).map(|(a, b)| a - b).collect();
    let norm = hminus1_norm(&grid, &diff).unwrap();
    assert!((norm * norm - h * h * d).abs() <= 1e-10 * h * h * d);

    let (d_half, _) = ms_dissipation(&f, &e, 0.5 * h).unwrap();
    assert!((d_half - 4.0 * d).abs() <= 1e-12 * d_half);

    let (d_same, u_same) = ms_dissipation(&e, &e, h).unwrap();
    assert_eq!(d_same, 0.0);
    assert!(u_same.values.iter().all(|v| *v == 0.0));
}

#[test]
fn mass_mismatch_is_rejected() {
    let grid = TorusGrid::new(8.0, 64).unwrap();
    let e = rasterize(&[ball([4.0; 3], 1.0)], &grid).unwrap();
    let f = rasterize(&[ball([4.0; 3], 1.1)], &grid).unwrap();
    assert!(matches!(ms_dissipation(&f, &e, 0.01), Err(curvflow::Error::MassMismatch(..))));
}

#[test]
fn stationary_ball_step() {
    let grid = TorusGrid::new(8.0, 64).unwrap();
    let e = MsState::new(vec![ball([4.0; 3], 1.0)], &grid).unwrap();
    let (f, diag) = ms_mm_step(&e, &MsConfig::default()).unwrap();
    assert!(f.components[0].coeffs.max_abs_diff(&e.components[0].coeffs) <= 1e-4);
    assert!((diag.lambda - 2.0).abs() <= 1e-3);
    assert_eq!(diag.dissipation, 0.0);
}

#[test]
fn equal_balls_barely_move() {
    let grid = TorusGrid::new(8.0, 64).unwrap();
    let r = 0.5f64.cbrt();
    let gap = 0.6;
    let e = MsState::new(
        vec![ball([4.0 - r - gap / 2.0, 4.0, 4.0], r), ball([4.0 + r + gap / 2.0, 4.0, 4.0], r)],
        &grid,
    )
    .unwrap();
    let cfg = MsConfig::default();
    let (_, diag) = ms_mm_step(&e, &cfg).unwrap();
    assert!(diag.displacement <= 10.0 * cfg.tolerance, "displacement {:e}", diag.displacement);
    let potential = poisson_solve(&grid, &vec![0.0; grid.len()]).unwrap();
    let rec = ms_alexandrov_check(&e.components, &potential).unwrap();
    assert_eq!(rec.balls, 2);
    assert!(rec.lhs.abs() <= 1e-9);
}

#[test]
fn perturbed_ball_step_lowers_perimeter() {
    let grid = TorusGrid::new(8.0, 64).unwrap();
    let e = MsState::new(vec![perturbed([4.0; 3], 1.0, 0.1)], &grid).unwrap();
    let cfg = MsConfig::default();
    let (f, diag) = ms_mm_step(&e, &cfg).unwrap();
    assert!(diag.perimeter_after < diag.perimeter_before);
    assert!(diag.perimeter_after + 0.5 * cfg.h * diag.dissipation <= diag.perimeter_before + cfg.comparison_tol);
    assert!(diag.mass_error <= 1e-8);
    assert!(diag.poisson_residual <= 1e-10);
    let identity = (diag.hminus1.powi(2) - cfg.h * cfg.h * diag.dissipation).abs() / (cfg.h * cfg.h * diag.dissipation);
    assert!(identity <= 1e-8);
    assert!((f.volume().unwrap() - e.volume().unwrap()).abs() <= 1e-10);

    let (_, u) = ms_dissipation(&f.chi, &e.chi, cfg.h).unwrap();
    let rec = ms_alexandrov_check(&f.components, &u).unwrap();
    assert!(rec.lhs > 0.0 && rec.rhs > 0.0);
    assert!(rec.ratio.unwrap().is_finite());
}

#[test]
fn stationary_run_has_zero_dissipation() {
    let grid = TorusGrid::new(4.0, 32).unwrap();
    let cfg = MsConfig { h: 0.05, ..MsConfig::default() };
    let trace = ms_run(&[ball([2.0; 3], 1.0)], &grid, 0.2, &cfg).unwrap();
    assert_eq!(trace.len(), 5);
    assert!(trace.entries.iter().skip(1).all(|e| e.diag.unwrap().dissipation == 0.0));
    let holder = holder_continuity_report(&trace).unwrap();
    assert_eq!(holder.constant, 0.0);
    let ledger = ms_ledger(&trace, 1e-6);
    assert!(ledger.telescoping_holds && ledger.comparison_holds);
}

#[test]
fn short_run_ledger_and_holder_subsampling() {
    let grid = TorusGrid::new(8.0, 64).unwrap();
    let cfg = MsConfig::default();
    let trace = ms_run(&[perturbed([4.0; 3], 2.0, 0.1)], &grid, 0.06, &cfg).unwrap();
    let ledger = ms_ledger(&trace, 1e-6);
    assert!(ledger.comparison_holds && ledger.perimeter_monotone && ledger.telescoping_holds);
    assert!(ledger.max_mass_error <= 1e-8);
    assert!(ledger.max_identity_error <= 1e-8);
    assert!(ledger.cumulative_dissipation <= ledger.initial_perimeter);

    let full = holder_continuity_report(&trace).unwrap();
    assert!(full.constant > 0.0 && full.constant.is_finite());
    let mut sub = trace.clone();
    sub.entries = trace.entries.iter().step_by(2).cloned().collect();
    let half = holder_continuity_report(&sub).unwrap();
    assert!(half.constant <= full.constant * (1.0 + 1e-12));
    assert!(half.pairs < full.pairs);

    let short = MsTrace { entries: trace.entries[..2].to_vec(), ..trace.clone() };
    assert!(holder_continuity_report(&short).is_err());
}

#[test]
fn translation_by_whole_voxels() {
    let grid = TorusGrid::new(4.0, 32).unwrap();
    let cfg = MsConfig { h: 0.02, ..MsConfig::default() };
    let shift = 3.0 * grid.spacing();
    let a = perturbed([2.0; 3], 1.0, 0.1);
    let b = perturbed([2.0 + shift, 2.0, 2.0], 1.0, 0.1);
    let ea = MsState::new(vec![a], &grid).unwrap();
    let eb = MsState::new(vec![b], &grid).unwrap();
    let rolled = roll_x(&grid, &ea.chi.occupancy, 3);
    let occ_err = rolled.iter().zip(&eb.chi.occupancy).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(occ_err <= 1e-12);
    let (_, da) = ms_mm_step(&ea, &cfg).unwrap();
    let (_, db) = ms_mm_step(&eb, &cfg).unwrap();
    assert!((da.dissipation - db.dissipation).abs() <= 1e-8 * da.dissipation);
    assert!((da.perimeter_after - db.perimeter_after).abs() <= 1e-12 * da.perimeter_after);
}

#[test]
fn density_of_spheres_and_perturbations() {
    let r = 2.0;
    let rho = 0.5;
    let rows = density_estimate_report(&[ball([0.0; 3], r)], &[rho]).unwrap();
    let alpha = 2.0 * (rho / (2.0 * r)).asin();
    let cap = 2.0 * PI * r * r * (1.0 - alpha.cos());
    assert!((rows[0].min - cap / (rho * rho)).abs() <= 1e-6);
    assert!((rows[0].max - rows[0].min).abs() <= 1e-6);

    let rows = density_estimate_report(&[perturbed([0.0; 3], 1.0, 0.1)], &[0.25, 0.5]).unwrap();
    assert!(rows.iter().all(|row| row.min > 0.0 && row.max >= row.min));
}

#[test]
fn stationary_ball_alexandrov_record() {
    let grid = TorusGrid::new(8.0, 64).unwrap();
    let e = MsState::new(vec![ball([4.0; 3], 1.0)], &grid).unwrap();
    let (_, u) = ms_dissipation(&e.chi, &e.chi, 0.01).unwrap();
    let rec = ms_alexandrov_check(&e.components, &u).unwrap();
    assert!(rec.lhs.abs() <= 1e-9);
    assert_eq!(rec.rhs, 0.0);
    assert_eq!(rec.ratio, None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn rasterized_mass_matches_sharp_volume(amp in -0.15f64..0.15, l in 2usize..5, dx in 0.0f64..0.2) {
        let grid = TorusGrid::new(4.0, 32).unwrap();
        let mut s = RadialSurface::from_mode(16, l, 0, amp).unwrap();
        s.center = [2.0 + dx, 2.0, 2.0 - dx];
        let chi = rasterize(&[s.clone()], &grid).unwrap();
        let v = sharp_volume(&s).unwrap();
        prop_assert!((chi.mass() - v).abs() <= 1e-8 * v);
        prop_assert!(chi.occupancy.iter().all(|o| (0.0..=1.0).contains(o)));
    }

    #[test]
    fn hminus1_squared_is_h_squared_dissipation(seed in 0u64..1000, h in 0.001f64..0.1) {
        let grid = TorusGrid::new(4.0, 32).unwrap();
        let f = random_rhs(&grid, seed);
        let (norm, u) = (hminus1_norm(&grid, &f).unwrap(), poisson_solve(&grid, &f.iter().map(|v| v / h).collect::<Vec<_>>()).unwrap());
        prop_assert!((norm * norm - h * h * u.energy).abs() <= 1e-10 * norm * norm);
    }
}
