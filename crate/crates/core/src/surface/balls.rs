use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

use super::curvature::curvature_fields;
use super::normalize::equivalent_radius;
use super::report::report_from_fields;
use super::{norm, sub, RadialSurface};

/// Default bound on each component's cmc deficit for ball detection.
pub const DEFAULT_CMC_THRESHOLD: f64 = 0.2;

/// Disjoint balls of a common radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallUnion {
    pub centers: Vec<[f64; 3]>,
    pub radius: f64,
    /// `min_{i≠j} |x_i − x_j| − 2r`, or `+∞` for a single ball.
    pub separation: f64,
    /// Radii of the balls with each component's volume.
    pub component_radii: Vec<f64>,
    /// `2/H̄` with `H̄` the area-averaged mean curvature over all components.
    pub curvature_radius: f64,
}

impl BallUnion {
    pub fn new(centers: Vec<[f64; 3]>, radius: f64) -> Self {
        let separation = min_separation(&centers, radius);
        let n = centers.len();
        Self {
            centers,
            radius,
            separation,
            component_radii: vec![radius; n],
            curvature_radius: radius,
        }
    }

    /// Balls of radius `N^{-1/3}`, whose union has the volume of the unit ball.
    pub fn equisize(centers: Vec<[f64; 3]>) -> Self {
        let r = (centers.len() as f64).powf(-1.0 / 3.0);
        Self::new(centers, r)
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn is_disjoint(&self) -> bool {
        self.separation >= 0.0
    }

    /// `|N − (2/H̄)^{-3}|`, which vanishes for equisize balls at unit total
    /// volume.
    pub fn count_consistency(&self) -> f64 {
        (self.len() as f64 - self.curvature_radius.powi(-3)).abs()
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        self.centers.iter().any(|c| norm(sub(p, *c)) < self.radius)
    }

    /// Distance from `p` to the union of the sphere boundaries.
    pub fn boundary_distance(&self, p: [f64; 3]) -> f64 {
        self.centers
            .iter()
            .map(|c| (norm(sub(p, *c)) - self.radius).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// The balls as radial surfaces at the given band limit.
    pub fn surfaces(&self, band_limit: usize) -> Vec<RadialSurface> {
        self.centers.iter().map(|c| RadialSurface::sphere(*c, self.radius, band_limit)).collect()
    }
}

fn min_separation(centers: &[[f64; 3]], radius: f64) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            best = best.min(norm(sub(centers[i], centers[j])) - 2.0 * radius);
        }
    }
    best
}

/// Fit a ball configuration to nearly spherical components: centers are
/// barycenters and the common radius is that of equal balls with the same
/// total volume.
pub fn detect_ball_configuration(components: &[RadialSurface], cmc_threshold: f64) -> Result<BallUnion> {
    if components.is_empty() {
        return Err(Error::InvalidInput("no components".into()));
    }
    let mut centers = Vec::with_capacity(components.len());
    let mut radii = Vec::with_capacity(components.len());
    let (mut total_volume, mut total_area, mut total_h) = (0.0, 0.0, 0.0);
    for (index, s) in components.iter().enumerate() {
        let cf = curvature_fields(s, &s.grid()?)?;
        let r = report_from_fields(s, &cf);
        let h0 = 2.0 * r.perimeter / (3.0 * r.volume);
        let deficit = cf.mean.iter().map(|h| (h / h0 - 1.0).abs()).fold(0.0, f64::max);
        if deficit > cmc_threshold {
            return Err(Error::NotNearBall { index, deficit, threshold: cmc_threshold });
        }
        centers.push(r.barycenter);
        radii.push(equivalent_radius(r.volume));
        total_volume += r.volume;
        total_area += r.perimeter;
        total_h += r.hbar * r.perimeter;
    }
    let n = components.len() as f64;
    let radius = (3.0 * total_volume / (4.0 * PI * n)).cbrt();
    let separation = min_separation(&centers, radius);
    Ok(BallUnion {
        centers,
        radius,
        separation,
        component_radii: radii,
        curvature_radius: 2.0 / (total_h / total_area),
    })
}
