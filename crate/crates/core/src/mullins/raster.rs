//! Voxel occupancies of star-shaped components.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::sharp_volume;
use super::torus::TorusGrid;
use crate::s2core::{Derivative, S2Grid};
use crate::surface::{BallUnion, RadialSurface};
use crate::{Error, Result};

/// Sub-samples per voxel edge.
pub const SUPERSAMPLE: usize = 4;
/// Band limit of the radius table used for point lookups.
const TABLE_BAND_LIMIT: usize = 63;
/// Interfaces must stay this many voxels away from the domain boundary.
const DOMAIN_MARGIN: f64 = 2.0;

/// Occupancy in `[0, 1]` per voxel and the mass it is held to.
#[derive(Debug, Clone)]
pub struct ChiSet {
    pub grid: TorusGrid,
    pub occupancy: Vec<f64>,
    /// Target volume `v`.
    pub volume: f64,
}

impl ChiSet {
    pub fn empty(grid: &TorusGrid) -> Self {
        Self { grid: grid.clone(), occupancy: vec![0.0; grid.len()], volume: 0.0 }
    }

    /// `Σ occupancy · spacing³`.
    pub fn mass(&self) -> f64 {
        self.grid.integrate(&self.occupancy)
    }

    /// `|mass − v| / v`, or the absolute mass when `v = 0`.
    pub fn mass_error(&self) -> f64 {
        let m = self.mass();
        if self.volume > 0.0 {
            (m - self.volume).abs() / self.volume
        } else {
            m.abs()
        }
    }

    /// L¹ distance of the occupancies, the grid version of `|AΔB|`.
    pub fn l1_distance(&self, other: &ChiSet) -> f64 {
        let s: f64 = self.occupancy.iter().zip(&other.occupancy).map(|(a, b)| (a - b).abs()).sum();
        s * self.grid.voxel_volume()
    }

    pub fn sparse(&self) -> SparseOccupancy {
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for (i, &v) in self.occupancy.iter().enumerate() {
            if v != 0.0 {
                indices.push(i as u32);
                values.push(v as f32);
            }
        }
        SparseOccupancy { indices, values, voxel_volume: self.grid.voxel_volume() }
    }
}

/// Nonzero occupancies in single precision, for traces.
#[derive(Debug, Clone, Serialize)]
pub struct SparseOccupancy {
    pub indices: Vec<u32>,
    pub values: Vec<f32>,
    pub voxel_volume: f64,
}

impl SparseOccupancy {
    pub fn l1_distance(&self, other: &SparseOccupancy) -> f64 {
        let (a, b) = (self, other);
        let (mut i, mut j) = (0, 0);
        let mut acc = 0.0f64;
        while i < a.indices.len() || j < b.indices.len() {
            let ia = a.indices.get(i).copied().unwrap_or(u32::MAX);
            let ib = b.indices.get(j).copied().unwrap_or(u32::MAX);
            if ia == ib {
                acc += (a.values[i] as f64 - b.values[j] as f64).abs();
                i += 1;
                j += 1;
            } else if ia < ib {
                acc += a.values[i] as f64;
                i += 1;
            } else {
                acc += b.values[j] as f64;
                j += 1;
            }
        }
        acc * self.voxel_volume
    }
}

/// Radius `1 + w` tabulated on a fine Gauss grid for bilinear lookup.
struct RadiusTable {
    center: [f64; 3],
    theta: Vec<f64>,
    n_phi: usize,
    values: Vec<f64>,
    north: f64,
    south: f64,
    min: f64,
    max: f64,
    /// Bound on `|∇ρ|/ρ` over the sphere.
    slope: f64,
}

impl RadiusTable {
    fn new(s: &RadialSurface) -> Result<Self> {
        let lt = TABLE_BAND_LIMIT.max(s.band_limit());
        let grid = S2Grid::new(lt)?;
        let c = s.coeffs.resized(lt);
        let mut d = grid.synthesize_many(&c, &[Derivative::Value, Derivative::Theta, Derivative::Phi])?;
        let dp = d.pop().unwrap();
        let dt = d.pop().unwrap();
        let mut values = d.pop().unwrap();
        values.iter_mut().for_each(|v| *v += 1.0);
        let n_phi = grid.n_phi();
        let theta: Vec<f64> = (0..grid.n_theta()).map(|i| grid.theta(i)).collect();
        let (min, max) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        if !(min > 0.0) {
            return Err(Error::NotStarShaped { node: 0, value: min });
        }
        let mut slope = 0.0f64;
        for i in 0..grid.n_theta() {
            let st = grid.sin_theta(i);
            for j in 0..n_phi {
                let k = grid.node_index(i, j);
                let g = (dt[k] * dt[k] + dp[k] * dp[k] / (st * st)).sqrt() / values[k];
                slope = slope.max(g);
            }
        }
        Ok(Self {
            center: s.center,
            theta,
            n_phi,
            values,
            north: s.radius_at([0.0, 0.0, 1.0]),
            south: s.radius_at([0.0, 0.0, -1.0]),
            min,
            max,
            slope,
        })
    }

    fn ring_value(&self, i: usize, j0: usize, j1: usize, t: f64) -> f64 {
        let row = i * self.n_phi;
        (1.0 - t) * self.values[row + j0] + t * self.values[row + j1]
    }

    /// Radius in the direction of `d` (not necessarily unit, nonzero).
    fn radius(&self, d: [f64; 3], r: f64) -> f64 {
        let theta = (d[2] / r).clamp(-1.0, 1.0).acos();
        let mut phi = d[1].atan2(d[0]);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        let u = phi * self.n_phi as f64 / (2.0 * PI);
        let j0 = (u.floor() as usize).min(self.n_phi - 1);
        let t = u - j0 as f64;
        let j1 = (j0 + 1) % self.n_phi;
        let nt = self.theta.len();
        if theta <= self.theta[0] {
            let s = theta / self.theta[0];
            return (1.0 - s) * self.north + s * self.ring_value(0, j0, j1, t);
        }
        if theta >= self.theta[nt - 1] {
            let s = (PI - theta) / (PI - self.theta[nt - 1]);
            return (1.0 - s) * self.south + s * self.ring_value(nt - 1, j0, j1, t);
        }
        let i1 = self.theta.partition_point(|&x| x <= theta).min(nt - 1);
        let i0 = i1 - 1;
        let s = (theta - self.theta[i0]) / (self.theta[i1] - self.theta[i0]);
        (1.0 - s) * self.ring_value(i0, j0, j1, t) + s * self.ring_value(i1, j0, j1, t)
    }
}

/// Occupancy of one component, written into `out`.
fn rasterize_component(s: &RadialSurface, grid: &TorusGrid, out: &mut [f64]) -> Result<()> {
    let table = RadiusTable::new(s)?;
    let h = grid.spacing();
    let n = grid.n();
    let c = table.center;
    let mut lo = [0usize; 3];
    let mut hi = [0usize; 3];
    for a in 0..3 {
        let (a0, a1) = (c[a] - table.max, c[a] + table.max);
        if a0 < DOMAIN_MARGIN * h || a1 > grid.side() - DOMAIN_MARGIN * h {
            return Err(Error::OutsideDomain);
        }
        lo[a] = ((a0 / h - 1.0).floor().max(0.0)) as usize;
        hi[a] = ((a1 / h + 1.0).ceil() as usize).min(n - 1);
    }
    let sub = h / SUPERSAMPLE as f64;
    // half-diagonal of a voxel, widened by the angular variation of ρ
    let band = 0.5 * 3f64.sqrt() * h * (1.0 + 1.5 * table.slope * table.max / table.min) + sub;
    let offsets: Vec<f64> = (0..SUPERSAMPLE).map(|a| ((a as f64 + 0.5) / SUPERSAMPLE as f64 - 0.5) * h).collect();
    let per_sample = 1.0 / (SUPERSAMPLE * SUPERSAMPLE * SUPERSAMPLE) as f64;

    let planes: Vec<Vec<(usize, f64)>> = (lo[0]..=hi[0])
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::new();
            for j in lo[1]..=hi[1] {
                for k in lo[2]..=hi[2] {
                    let p = grid.voxel_center(i, j, k);
                    let d = [p[0] - c[0], p[1] - c[1], p[2] - c[2]];
                    let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                    let occ = if r < 0.5 * table.min - h {
                        1.0
                    } else {
                        let gap = r - table.radius(d, r);
                        if gap > band {
                            0.0
                        } else if gap < -band {
                            1.0
                        } else {
                            let mut acc = 0.0;
                            for ox in &offsets {
                                for oy in &offsets {
                                    for oz in &offsets {
                                        let q = [d[0] + ox, d[1] + oy, d[2] + oz];
                                        let rq = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
                                        let g = rq - table.radius(q, rq);
                                        acc += (0.5 - g / sub).clamp(0.0, 1.0);
                                    }
                                }
                            }
                            acc * per_sample
                        }
                    };
                    if occ > 0.0 {
                        row.push((grid.index(i, j, k), occ));
                    }
                }
            }
            row
        })
        .collect();
    for (idx, occ) in planes.into_iter().flatten() {
        if out[idx] > 0.0 {
            return Err(Error::Collision { gap: 0.0, limit: DOMAIN_MARGIN * h });
        }
        out[idx] = occ;
    }
    Ok(())
}

/// Supersampled occupancies without the mass correction; `volume` is the
/// sum of the components' volumes.
pub fn rasterize_uncorrected(components: &[RadialSurface], grid: &TorusGrid) -> Result<ChiSet> {
    let mut occupancy = vec![0.0; grid.len()];
    let mut volume = 0.0;
    for s in components {
        rasterize_component(s, grid, &mut occupancy)?;
        volume += sharp_volume(s)?;
    }
    Ok(ChiSet { grid: grid.clone(), occupancy, volume })
}

/// Occupancies whose mass equals the components' total volume.
///
/// Each component is sampled `4³` times per voxel with a linear ramp one
/// sub-sample wide, so the occupancy moves continuously with the interface.
/// The remaining quadrature error is removed by adding `c·o(1 − o)` to every
/// fractional voxel, which keeps values in `[0, 1]`.
pub fn rasterize(components: &[RadialSurface], grid: &TorusGrid) -> Result<ChiSet> {
    let raw = rasterize_uncorrected(components, grid)?;
    let volume = raw.volume;
    correct_mass(raw.occupancy, volume, grid)
}

pub(crate) fn correct_mass(mut occupancy: Vec<f64>, volume: f64, grid: &TorusGrid) -> Result<ChiSet> {
    let vox = grid.voxel_volume();
    let mass = grid.integrate(&occupancy);
    let weight: f64 = occupancy.iter().map(|o| o * (1.0 - o)).sum::<f64>() * vox;
    if mass != volume {
        if weight <= 0.0 {
            return Err(Error::MassMismatch(mass, volume));
        }
        let c = (volume - mass) / weight;
        if c.abs() > 1.0 {
            return Err(Error::MassMismatch(mass, volume));
        }
        occupancy.iter_mut().for_each(|o| *o += c * *o * (1.0 - *o));
    }
    Ok(ChiSet { grid: grid.clone(), occupancy, volume })
}

/// Rasterizes the balls of a union at band limit 16.
pub fn rasterize_balls(balls: &BallUnion, grid: &TorusGrid) -> Result<ChiSet> {
    rasterize(&balls.surfaces(16), grid)
}
