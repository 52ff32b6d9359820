//! Measurements along Mullins–Sekerka runs: Hölder continuity in time,
//! density of the interface in small balls, and the quantitative Alexandrov
//! comparison against the potential.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::run::MsTrace;
use super::sharp_volume;
use super::torus::Potential;
use crate::quadrature::gauss_legendre_interval;
use crate::surface::{
    add, cross, curvature_fields, detect_ball_configuration, norm, scale, sub, tangent_frame, RadialSurface,
    DEFAULT_CMC_THRESHOLD,
};
use crate::{Error, Result};

/// Interface points sampled by the density report.
pub const DENSITY_SAMPLES: usize = 64;
const DENSITY_ANGLES: usize = 64;
const DENSITY_RADIAL_NODES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderReport {
    /// `sup |E(t)ΔE(s)| / (t − s)^{1/4}` over pairs with `h ≤ t − s ≤ 1`.
    pub constant: f64,
    pub pairs: usize,
    /// Entry indices attaining the supremum.
    pub worst: Option<(usize, usize)>,
}

/// Empirical time-Hölder constant with exponent `1/4`, `|AΔB|` taken as the
/// L¹ distance of the occupancies.
pub fn holder_continuity_report(trace: &MsTrace) -> Result<HolderReport> {
    let n = trace.entries.len();
    if n < 3 {
        return Err(Error::TraceTooShort(n));
    }
    let h = trace.h;
    let eps = 1e-9 * h;
    let per_row: Vec<(f64, usize, Option<(usize, usize)>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (mut best, mut count, mut worst) = (0.0f64, 0usize, None);
            for j in (i + 1)..n {
                let dt = trace.entries[j].t - trace.entries[i].t;
                if dt < h - eps {
                    continue;
                }
                if dt > 1.0 + eps {
                    break;
                }
                count += 1;
                let d = trace.entries[i].occupancy.l1_distance(&trace.entries[j].occupancy);
                let ratio = d / dt.powf(0.25);
                if ratio > best {
                    best = ratio;
                    worst = Some((i, j));
                }
            }
            (best, count, worst)
        })
        .collect();
    let mut report = HolderReport { constant: 0.0, pairs: 0, worst: None };
    for (best, count, worst) in per_row {
        report.pairs += count;
        if best > report.constant {
            report.constant = best;
            report.worst = worst;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityRow {
    pub radius: f64,
    /// Extremes of `H²(∂E ∩ B_ρ(x)) / ρ²` over the sampled points.
    pub min: f64,
    pub max: f64,
}

/// Area of the part of `s` within distance `radius` of `s.point(y0)`.
///
/// Uses polar coordinates `(α, β)` about `y0` on the sphere; along each
/// direction `β` the exit angle is found by bisection and the area element
/// is integrated by Gauss–Legendre.
fn area_in_ball(s: &RadialSurface, y0: [f64; 3], radius: f64) -> f64 {
    let x = s.point(y0);
    let (t1, t2) = tangent_frame(y0);
    let mut total = 0.0;
    for b in 0..DENSITY_ANGLES {
        let beta = 2.0 * PI * b as f64 / DENSITY_ANGLES as f64;
        let (sb, cb) = beta.sin_cos();
        let u = add(scale(t1, cb), scale(t2, sb));
        let v = add(scale(t1, -sb), scale(t2, cb));
        let dir = |alpha: f64| {
            let (sa, ca) = alpha.sin_cos();
            add(scale(y0, ca), scale(u, sa))
        };
        let gap = |alpha: f64| norm(sub(s.point(dir(alpha)), x)) - radius;
        let (mut lo, mut hi) = (0.0, 0.5 * PI);
        while gap(hi) < 0.0 && hi < PI {
            hi = (hi + 0.25 * PI).min(PI);
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if gap(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let exit = 0.5 * (lo + hi);
        let mut ray = 0.0;
        for (alpha, w) in gauss_legendre_interval(DENSITY_RADIAL_NODES, 0.0, exit) {
            let (sa, ca) = alpha.sin_cos();
            let y = dir(alpha);
            let y_alpha = add(scale(y0, -sa), scale(u, ca));
            let y_beta = scale(v, sa);
            let jet = s.radius_jet(y);
            let grad = jet.tangential_gradient(y);
            let x_alpha = add(scale(y, crate::surface::dot(grad, y_alpha)), scale(y_alpha, jet.value));
            let x_beta = add(scale(y, crate::surface::dot(grad, y_beta)), scale(y_beta, jet.value));
            ray += w * norm(cross(x_alpha, x_beta));
        }
        total += ray * 2.0 * PI / DENSITY_ANGLES as f64;
    }
    total
}

/// Fibonacci directions on the sphere.
fn sample_directions(n: usize) -> Vec<[f64; 3]> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * k as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// `min` and `max` of `H²(∂E ∩ B_ρ(x))/ρ²` over 64 deterministic interface
/// points, for each radius in `(0, 1)`. Points are spread over the
/// components round-robin; only the component carrying `x` is measured, so
/// the radii should stay below the gaps between components.
pub fn density_estimate_report(components: &[RadialSurface], radii: &[f64]) -> Result<Vec<DensityRow>> {
    if components.is_empty() {
        return Err(Error::InvalidInput("no components".into()));
    }
    if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(Error::InvalidInput(format!("density radius {r} is outside (0, 1)")));
    }
    let dirs = sample_directions(DENSITY_SAMPLES);
    let mut rows = Vec::with_capacity(radii.len());
    for &radius in radii {
        let ratios: Vec<f64> = dirs
            .par_iter()
            .enumerate()
            .map(|(k, y)| area_in_ball(&components[k % components.len()], *y, radius) / (radius * radius))
            .collect();
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        rows.push(DensityRow { radius, min, max });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MsAlexandrovRecord {
    /// Number of balls found by the detector.
    pub balls: usize,
    pub perimeter: f64,
    pub volume: f64,
    /// `P − N^{1/3}·P(ball of the total volume)`; equals `P − 4πN^{1/3}` at
    /// volume `4π/3`.
    pub lhs: f64,
    /// `∫|DU|²`.
    pub rhs: f64,
    pub ratio: Option<f64>,
}

/// Both sides of `P(E) − 4πN^{1/3} ≤ C‖DU‖²` for a state and its potential.
pub fn ms_alexandrov_check(components: &[RadialSurface], potential: &Potential) -> Result<MsAlexandrovRecord> {
    let balls = detect_ball_configuration(components, DEFAULT_CMC_THRESHOLD)?.len();
    let mut perimeter = 0.0;
    let mut volume = 0.0;
    for s in components {
        let cf = curvature_fields(s, &s.grid()?)?;
        perimeter += cf.integrate_area(&vec![1.0; cf.len()]);
        volume += sharp_volume(s)?;
    }
    let lhs = perimeter - (balls as f64).cbrt() * (36.0 * PI * volume * volume).cbrt();
    let rhs = potential.energy;
    let ratio = (rhs > 0.0).then(|| lhs / rhs);
    Ok(MsAlexandrovRecord { balls, perimeter, volume, lhs, rhs, ratio })
}
