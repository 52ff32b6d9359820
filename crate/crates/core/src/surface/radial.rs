use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::s2core::{Derivative, PointJet, S2Grid, ShCoeffs};

use super::{norm, scale, sub};

/// Closed star-shaped surface `{c + (1 + w(x)) x : x ∈ S²}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSurface {
    pub center: [f64; 3],
    pub coeffs: ShCoeffs,
}

impl RadialSurface {
    pub fn new(center: [f64; 3], coeffs: ShCoeffs) -> Self {
        Self { center, coeffs }
    }

    /// Unit sphere at the origin.
    pub fn unit_sphere(band_limit: usize) -> Self {
        Self::new([0.0; 3], ShCoeffs::zeros(band_limit))
    }

    pub fn sphere(center: [f64; 3], radius: f64, band_limit: usize) -> Self {
        let mut c = ShCoeffs::zeros(band_limit);
        c.set(0, 0, (radius - 1.0) * (4.0 * PI).sqrt());
        Self::new(center, c)
    }

    /// Unit sphere perturbed by `amplitude · Y_lm`.
    pub fn from_mode(band_limit: usize, l: usize, m: i64, amplitude: f64) -> Result<Self> {
        Ok(Self::new([0.0; 3], ShCoeffs::single_mode(band_limit, l, m, amplitude)?))
    }

    pub fn band_limit(&self) -> usize {
        self.coeffs.band_limit()
    }

    pub fn grid(&self) -> Result<S2Grid> {
        S2Grid::new(self.band_limit())
    }

    /// Radius `1 + w` in the direction of `dir`.
    pub fn radius_at(&self, dir: [f64; 3]) -> f64 {
        1.0 + self.coeffs.eval_direction(dir)
    }

    /// Jet of the radius function (extension of `1 + w`).
    pub fn radius_jet(&self, dir: [f64; 3]) -> PointJet {
        let mut j = self.coeffs.jet(dir);
        j.value += 1.0;
        j
    }

    /// Surface point in the unit direction `dir`.
    pub fn point(&self, dir: [f64; 3]) -> [f64; 3] {
        let r = self.radius_at(dir);
        [self.center[0] + r * dir[0], self.center[1] + r * dir[1], self.center[2] + r * dir[2]]
    }

    /// Radius values `1 + w` at the nodes of `grid`.
    pub fn radii(&self, grid: &S2Grid) -> Result<Vec<f64>> {
        let c = self.coeffs_for(grid)?;
        let mut r = grid.synthesize(&c, Derivative::Value)?;
        r.iter_mut().for_each(|v| *v += 1.0);
        Ok(r)
    }

    /// Coefficients padded to the band limit of `grid`.
    pub(crate) fn coeffs_for(&self, grid: &S2Grid) -> Result<ShCoeffs> {
        if grid.band_limit() < self.band_limit() {
            return Err(Error::BandLimitMismatch { grid: grid.band_limit(), coeffs: self.band_limit() });
        }
        Ok(if grid.band_limit() == self.band_limit() {
            self.coeffs.clone()
        } else {
            self.coeffs.resized(grid.band_limit())
        })
    }

    /// Error unless `1 + w > 0` at every node of `grid`.
    pub fn check_star_shaped(&self, grid: &S2Grid) -> Result<()> {
        let r = self.radii(grid)?;
        match r.iter().enumerate().find(|(_, v)| **v <= 0.0 || !v.is_finite()) {
            Some((node, value)) => Err(Error::NotStarShaped { node, value: *value }),
            None => Ok(()),
        }
    }

    /// Inside test along the ray from the center.
    pub fn contains(&self, p: [f64; 3]) -> bool {
        let d = sub(p, self.center);
        let r = norm(d);
        r == 0.0 || r < self.radius_at(scale(d, 1.0 / r))
    }

    /// Dilation about the center: `1 + w -> α(1 + w)`.
    pub fn scaled(&self, alpha: f64) -> Self {
        let mut c = self.coeffs.scaled(alpha);
        let a00 = c.get(0, 0) + (alpha - 1.0) * (4.0 * PI).sqrt();
        c.set(0, 0, a00);
        Self::new(self.center, c)
    }

    pub fn translated(&self, shift: [f64; 3]) -> Self {
        Self::new(
            [self.center[0] + shift[0], self.center[1] + shift[1], self.center[2] + shift[2]],
            self.coeffs.clone(),
        )
    }

    /// Same shape expressed at another band limit (truncating or padding).
    pub fn with_band_limit(&self, band_limit: usize) -> Self {
        Self::new(self.center, self.coeffs.resized(band_limit))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_radius_and_scaling() {
        let s = RadialSurface::sphere([0.0; 3], 2.0, 8);
        assert!((s.radius_at([0.3, 0.4, 0.5]) - 2.0).abs() < 1e-14);
        let t = s.scaled(0.5);
        assert!((t.radius_at([0.0, 0.0, -1.0]) - 1.0).abs() < 1e-14);
        assert!(t.contains([0.5, 0.5, 0.0]));
        assert!(!t.contains([0.8, 0.8, 0.0]));
    }

    #[test]
    fn star_shape_violation_detected() {
        let s = RadialSurface::from_mode(8, 2, 0, -3.0).unwrap();
        let g = s.grid().unwrap();
        assert!(matches!(s.check_star_shaped(&g), Err(Error::NotStarShaped { .. })));
    }
}
