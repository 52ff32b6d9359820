use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::s2core::S2Grid;

use super::{curvature_fields, dot, CurvatureFields, RadialSurface};

/// Node count above which the diameter estimate strides over rings and
/// longitudes instead of testing every pair.
const DIAMETER_NODE_CAP: usize = 12_000;

/// Global geometric quantities of a closed surface.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometricReport {
    pub perimeter: f64,
    /// Enclosed volume from the radial formula `⅓∫ρ³`.
    pub volume: f64,
    /// Enclosed volume from the divergence theorem, `⅓∫ ν·f`.
    pub volume_divergence: f64,
    /// Area average of the mean curvature.
    pub hbar: f64,
    /// `∫(H − H̄)²`.
    pub osc: f64,
    /// `∫|Å|²`.
    pub traceless_energy: f64,
    /// `¼∫H²`.
    pub willmore: f64,
    /// `∫H²`.
    pub mean_curvature_sq: f64,
    /// `∫K`.
    pub total_gauss_curvature: f64,
    /// Barycenter of the enclosed region.
    pub barycenter: [f64; 3],
    pub diameter: f64,
}

/// Report on the surface's own grid.
pub fn report(s: &RadialSurface) -> Result<GeometricReport> {
    report_on(s, &s.grid()?)
}

/// Report using quadrature on `grid`.
pub fn report_on(s: &RadialSurface, grid: &S2Grid) -> Result<GeometricReport> {
    let cf = curvature_fields(s, grid)?;
    Ok(report_from_fields(s, &cf))
}

pub(crate) fn report_from_fields(s: &RadialSurface, cf: &CurvatureFields) -> GeometricReport {
    let grid = &cf.grid;
    let n = cf.len();
    let ones = vec![1.0; n];
    let perimeter = cf.integrate_area(&ones);
    let rho3: Vec<f64> = cf.rho.iter().map(|r| r * r * r).collect();
    let volume = grid.integrate_unchecked(&rho3) / 3.0;
    let support: Vec<f64> = (0..n).map(|k| dot(cf.normal[k], cf.position[k])).collect();
    let volume_divergence = cf.integrate_area(&support) / 3.0;
    let hbar = cf.integrate_area(&cf.mean) / perimeter;
    let dev: Vec<f64> = cf.mean.iter().map(|h| (h - hbar) * (h - hbar)).collect();
    let osc = cf.integrate_area(&dev);
    let traceless_energy = cf.integrate_area(&cf.traceless_sq);
    let h2: Vec<f64> = cf.mean.iter().map(|h| h * h).collect();
    let mean_curvature_sq = cf.integrate_area(&h2);
    let total_gauss_curvature = cf.integrate_area(&cf.gauss);
    let nodes = grid.nodes();
    let mut barycenter = s.center;
    for (axis, b) in barycenter.iter_mut().enumerate() {
        let moment: Vec<f64> = (0..n).map(|k| 0.25 * cf.rho[k].powi(4) * nodes[k][axis]).collect();
        *b += grid.integrate_unchecked(&moment) / volume;
    }
    GeometricReport {
        perimeter,
        volume,
        volume_divergence,
        hbar,
        osc,
        traceless_energy,
        willmore: 0.25 * mean_curvature_sq,
        mean_curvature_sq,
        total_gauss_curvature,
        barycenter,
        diameter: diameter_estimate(cf),
    }
}

fn diameter_estimate(cf: &CurvatureFields) -> f64 {
    let grid = &cf.grid;
    let n = cf.len();
    let stride = ((n as f64 / DIAMETER_NODE_CAP as f64).sqrt().ceil() as usize).max(1);
    let pts: Vec<[f64; 3]> = (0..grid.n_theta())
        .step_by(stride)
        .flat_map(|i| (0..grid.n_phi()).step_by(stride).map(move |j| (i, j)))
        .map(|(i, j)| cf.position[grid.node_index(i, j)])
        .collect();
    max_pairwise_distance(&pts)
}

pub(crate) fn max_pairwise_distance(pts: &[[f64; 3]]) -> f64 {
    let best = pts
        .par_iter()
        .enumerate()
        .map(|(a, p)| {
            pts[a + 1..]
                .iter()
                .map(|q| {
                    let d = [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
                    dot(d, d)
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    best.sqrt()
}
