//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

fn factorial_ratio(l: usize, m: usize) -> f64 {
    // (l − m)! / (l + m)!
    ((l - m + 1)..=(l + m)).map(|k| 1.0 / k as f64).product()
}

/// Associated Legendre `P_l^m(x)` without the Condon–Shortley phase, by the
/// textbook upward recurrence in `l`.
pub fn legendre(l: usize, m: usize, x: f64) -> f64 {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 0..m {
        pmm *= (2 * k + 1) as f64 * s;
    }
    if l == m {
        return pmm;
    }
    let mut p_prev = pmm;
    let mut p = x * (2 * m + 1) as f64 * pmm;
    for ll in (m + 2)..=l {
        let next = ((2 * ll - 1) as f64 * x * p - (ll + m - 1) as f64 * p_prev) / (ll - m) as f64;
        p_prev = p;
        p = next;
    }
    p
}

/// Real orthonormal spherical harmonic, `cos(mφ)` for `m > 0` and
/// `sin(|m|φ)` for `m < 0`.
pub fn real_sh(l: usize, m: i64, theta: f64, phi: f64) -> f64 {
    let am = m.unsigned_abs() as usize;
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * factorial_ratio(l, am)).sqrt();
    let p = legendre(l, am, theta.cos());
    match m {
        0 => norm * p,
        m if m > 0 => 2f64.sqrt() * norm * p * (am as f64 * phi).cos(),
        _ => 2f64.sqrt() * norm * p * (am as f64 * phi).sin(),
    }
}

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
pub fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// Global quantities of the axisymmetric surface `ρ(θ)·(sinθ cosφ, sinθ sinφ, cosθ)`
/// from a dense θ quadrature, with derivatives of `ρ` by central differences.
#[derive(Debug, Clone, Copy)]
pub struct Revolution {
    pub perimeter: f64,
    pub volume: f64,
    pub total_mean: f64,
    pub mean_sq: f64,
    pub traceless: f64,
    pub total_gauss: f64,
}

/// Principal curvatures (meridian, parallel) at `θ`.
pub fn revolution_curvatures(rho: &impl Fn(f64) -> f64, theta: f64) -> (f64, f64, f64) {
    let d = 1e-4;
    let (r0, rp, rm) = (rho(theta), rho(theta + d), rho(theta - d));
    let dr = (rp - rm) / (2.0 * d);
    let ddr = (rp - 2.0 * r0 + rm) / (d * d);
    let (s, c) = theta.sin_cos();
    // profile (x, z) = ρ(sinθ, cosθ)
    let x1 = dr * s + r0 * c;
    let z1 = dr * c - r0 * s;
    let x2 = ddr * s + 2.0 * dr * c - r0 * s;
    let z2 = ddr * c - 2.0 * dr * s - r0 * c;
    let speed = (x1 * x1 + z1 * z1).sqrt();
    let k_meridian = (z1 * x2 - x1 * z2) / speed.powi(3);
    let k_parallel = -z1 / (r0 * s * speed);
    (k_meridian, k_parallel, speed)
}

pub fn revolution(rho: impl Fn(f64) -> f64, panels: usize) -> Revolution {
    let eps = 1e-9;
    let area_el = |t: f64| {
        let (_, _, speed) = revolution_curvatures(&rho, t);
        2.0 * PI * rho(t) * t.sin() * speed
    };
    let with = |f: &dyn Fn(f64, f64) -> f64| {
        simpson(eps, PI - eps, panels, |t| {
            let (k1, k2, _) = revolution_curvatures(&rho, t);
            f(k1, k2) * area_el(t)
        })
    };
    Revolution {
        perimeter: with(&|_, _| 1.0),
        volume: simpson(0.0, PI, panels, |t| 2.0 * PI / 3.0 * rho(t).powi(3) * t.sin()),
        total_mean: with(&|a, b| a + b),
        mean_sq: with(&|a, b| (a + b).powi(2)),
        traceless: with(&|a, b| 0.5 * (a - b).powi(2)),
        total_gauss: with(&|a, b| a * b),
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
