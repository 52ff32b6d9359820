//! Measurement harness for the quantitative Alexandrov inequality
//! `P(E) − P(B₁) ≤ C ∫(H − H̄)²` on volume-normalized star-shaped surfaces,
//! its exponent sharpness, and the multi-ball variant.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::s2core::{random_band_limited, RandomModes};
use crate::surface::{
    curvature_fields, detect_ball_configuration, report, RadialSurface, UNIT_BALL_VOLUME,
};

/// Perimeter of two disjoint balls of half the unit volume, `4π∛2`.
pub const TWO_BALL_PERIMETER: f64 = 15.832_634_857_811_492;
pub const DEFAULT_DELTA0: f64 = 0.5;
/// Below this the right-hand side is treated as exactly zero.
pub const RHS_FLOOR: f64 = 1e-14;
pub const DEFAULT_SWEEP_BAND_LIMIT: usize = 24;

/// Both sides of the inequality for one normalized surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Measurement {
    /// `P(E) − 4π`.
    pub lhs: f64,
    /// `∫(H − H̄)²`.
    pub rhs: f64,
    /// `lhs / rhs`, or 0 when `rhs` is below [`RHS_FLOOR`].
    pub ratio: f64,
    pub perimeter: f64,
    /// `P ≤ 4π∛2 − δ₀`.
    pub admissible: bool,
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs < RHS_FLOOR {
        0.0
    } else {
        lhs / rhs
    }
}

/// Normalize `s` and measure both sides.
pub fn lhs_rhs(s: &RadialSurface, delta0: f64) -> Result<Measurement> {
    let r = report(&s.normalize()?)?;
    Ok(measure(r.perimeter, r.osc, delta0))
}

fn measure(perimeter: f64, osc: f64, delta0: f64) -> Measurement {
    let lhs = perimeter - 4.0 * PI;
    Measurement {
        lhs,
        rhs: osc,
        ratio: ratio(lhs, osc),
        perimeter,
        admissible: perimeter <= TWO_BALL_PERIMETER - delta0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepConfig {
    pub n_samples: usize,
    pub seed: u64,
    pub l_min: usize,
    pub l_max: usize,
    pub amplitude: f64,
    pub delta0: f64,
    pub band_limit: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_samples: 200,
            seed: 42,
            l_min: 2,
            l_max: 6,
            amplitude: 0.15,
            delta0: DEFAULT_DELTA0,
            band_limit: DEFAULT_SWEEP_BAND_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub seed: u64,
    pub l_min: usize,
    pub l_max: usize,
    pub amplitude: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub perimeter: f64,
    pub admissible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSummary {
    pub max_ratio: f64,
    pub min_ratio: f64,
    /// Empirical constant: the largest ratio over admissible samples.
    pub empirical_c: f64,
    pub admissible: usize,
    pub excluded: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub records: Vec<SweepRecord>,
    pub summary: SweepSummary,
}

/// Measure `n_samples` random perturbations; sample `i` uses seed
/// `seed + i`. Records are returned in seed order.
pub fn sweep(config: &SweepConfig) -> Result<Sweep> {
    if config.n_samples == 0 {
        return Err(Error::InvalidInput("sweep needs at least one sample".into()));
    }
    let modes = RandomModes::new(config.l_min, config.l_max, config.amplitude);
    let records = (0..config.n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let seed = config.seed.wrapping_add(i);
            let coeffs = random_band_limited(seed, modes, config.band_limit)?;
            let m = lhs_rhs(&RadialSurface::new([0.0; 3], coeffs), config.delta0)?;
            Ok(SweepRecord {
                seed,
                l_min: config.l_min,
                l_max: config.l_max,
                amplitude: config.amplitude,
                lhs: m.lhs,
                rhs: m.rhs,
                ratio: m.ratio,
                perimeter: m.perimeter,
                admissible: m.admissible,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let admissible: Vec<&SweepRecord> = records.iter().filter(|r| r.admissible).collect();
    if admissible.is_empty() {
        return Err(Error::NoAdmissibleSamples);
    }
    let ratios: Vec<f64> = admissible.iter().filter(|r| r.rhs >= RHS_FLOOR).map(|r| r.ratio).collect();
    let max_ratio = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let (max_ratio, min_ratio) = if ratios.is_empty() { (0.0, 0.0) } else { (max_ratio, min_ratio) };
    let summary = SweepSummary {
        max_ratio,
        min_ratio,
        empirical_c: max_ratio,
        admissible: admissible.len(),
        excluded: records.len() - admissible.len(),
    };
    Ok(Sweep { records, summary })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpnessRow {
    pub amplitude: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`.
    pub ratio: f64,
    /// `lhs / rhs^p`.
    pub ratio_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessTable {
    pub l: usize,
    pub m: i64,
    pub p: f64,
    pub rows: Vec<SharpnessRow>,
}

/// Tabulate both sides for `w = ε Y_lm` over decreasing amplitudes.
pub fn sharpness_probe(l: usize, m: i64, amplitudes: &[f64], p: f64, band_limit: usize) -> Result<SharpnessTable> {
    if amplitudes.is_empty() || amplitudes.iter().any(|a| !(*a > 0.0 && *a <= 0.2)) {
        return Err(Error::InvalidInput("amplitudes must lie in (0, 0.2]".into()));
    }
    if amplitudes.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput("amplitudes must be strictly decreasing".into()));
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidInput(format!("probe exponent must be at least 1, got {p}")));
    }
    let rows = amplitudes
        .iter()
        .map(|&eps| {
            let s = RadialSurface::from_mode(band_limit, l, m, eps)?;
            let meas = lhs_rhs(&s, DEFAULT_DELTA0)?;
            Ok(SharpnessRow {
                amplitude: eps,
                lhs: meas.lhs,
                rhs: meas.rhs,
                ratio: ratio(meas.lhs, meas.rhs),
                ratio_p: if meas.rhs < RHS_FLOOR { 0.0 } else { meas.lhs / meas.rhs.powf(p) },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SharpnessTable { l, m, p, rows })
}

/// Power-mean inequality `Σ r_i² ≤ N^{1/3} (Σ r_i³)^{2/3}`; returns
/// `(lhs, rhs, holds)`.
pub fn radii_power_mean_check(radii: &[f64]) -> (f64, f64, bool) {
    let n = radii.len() as f64;
    let lhs: f64 = radii.iter().map(|r| r * r).sum();
    let rhs = n.cbrt() * radii.iter().map(|r| r * r * r).sum::<f64>().powf(2.0 / 3.0);
    (lhs, rhs, lhs <= rhs * (1.0 + 1e-12))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiBallRecord {
    pub n: usize,
    /// `P(E) − 4π N^{1/3}`.
    pub lhs: f64,
    /// `Σ_i ∫(H − H̄_E)²` with the union's `H̄_E`.
    pub rhs: f64,
    pub ratio: f64,
    pub perimeter: f64,
    pub hbar: f64,
    pub separation: f64,
    pub radii: Vec<f64>,
    pub radii_lhs: f64,
    pub radii_rhs: f64,
    pub radii_check: bool,
}

/// Jointly normalize the components (one dilation about the union's
/// barycenter) and measure the multi-ball inequality.
pub fn multiball_check(components: &[RadialSurface], min_separation: f64) -> Result<MultiBallRecord> {
    if components.is_empty() {
        return Err(Error::InvalidInput("no components".into()));
    }
    for (i, a) in components.iter().enumerate() {
        for (j, b) in components.iter().enumerate() {
            if i != j {
                let grid = a.grid()?;
                let radii = a.radii(&grid)?;
                if grid.nodes().iter().zip(&radii).any(|(x, r)| {
                    b.contains([a.center[0] + r * x[0], a.center[1] + r * x[1], a.center[2] + r * x[2]])
                }) {
                    return Err(Error::Separation(format!("components {i} and {j} overlap")));
                }
            }
        }
    }
    let reports = components.iter().map(report).collect::<Result<Vec<_>>>()?;
    let volume: f64 = reports.iter().map(|r| r.volume).sum();
    let mut g = [0.0; 3];
    for r in &reports {
        for a in 0..3 {
            g[a] += r.barycenter[a] * r.volume / volume;
        }
    }
    let alpha = (UNIT_BALL_VOLUME / volume).cbrt();
    let scaled: Vec<RadialSurface> = components
        .iter()
        .map(|s| {
            let mut t = s.scaled(alpha);
            for a in 0..3 {
                t.center[a] = g[a] + alpha * (s.center[a] - g[a]);
            }
            t
        })
        .collect();
    let balls = detect_ball_configuration(&scaled, f64::INFINITY)?;
    if balls.separation < min_separation {
        return Err(Error::Separation(format!(
            "margin {:.6e} below required {:.6e}",
            balls.separation, min_separation
        )));
    }
    let fields = scaled.iter().map(|s| curvature_fields(s, &s.grid()?)).collect::<Result<Vec<_>>>()?;
    let mut perimeter = 0.0;
    let mut total_h = 0.0;
    for cf in &fields {
        perimeter += cf.integrate_area(&vec![1.0; cf.len()]);
        total_h += cf.integrate_area(&cf.mean);
    }
    let hbar = total_h / perimeter;
    let rhs: f64 = fields
        .iter()
        .map(|cf| {
            let dev: Vec<f64> = cf.mean.iter().map(|h| (h - hbar).powi(2)).collect();
            cf.integrate_area(&dev)
        })
        .sum();
    let n = components.len();
    let lhs = perimeter - 4.0 * PI * (n as f64).cbrt();
    let (radii_lhs, radii_rhs, radii_check) = radii_power_mean_check(&balls.component_radii);
    Ok(MultiBallRecord {
        n,
        lhs,
        rhs,
        ratio: ratio(lhs, rhs),
        perimeter,
        hbar,
        separation: balls.separation,
        radii: balls.component_radii,
        radii_lhs,
        radii_rhs,
        radii_check,
    })
}
