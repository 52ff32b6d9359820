use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::ChebyshevProfile;
use crate::s2core::S2Grid;
use crate::surface::{DistanceField, RadialSurface};

/// Chebyshev nodes per direction.
const PROFILE_NODES: usize = 8;

/// Radial profiles `q(t) = d_E(c + t x) t²` along every grid direction,
/// restricted to a band `|t − ρ_E(x)| ≤ δ`. The antiderivative anchored at
/// `ρ_E` gives the contribution of that direction to `∫_F d_E − ∫_E d_E`.
#[derive(Debug, Clone)]
pub(crate) struct DistanceProfile {
    pub rho_e: Vec<f64>,
    pub half_width: f64,
    profiles: Vec<ChebyshevProfile>,
}

impl DistanceProfile {
    pub fn build(e: &RadialSurface, grid: &S2Grid, half_width: f64) -> Result<Self> {
        let rho_e = e.radii(grid)?;
        let min_rho = rho_e.iter().copied().fold(f64::INFINITY, f64::min);
        if !(half_width > 0.0 && half_width < min_rho) {
            return Err(Error::InvalidInput(format!(
                "profile half width {half_width:.3e} must lie in (0, {min_rho:.3e})"
            )));
        }
        let field = DistanceField::new(e)?;
        let dirs = grid.nodes();
        let profiles = (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let (lo, hi) = (rho_e[k] - half_width, rho_e[k] + half_width);
                let ts = ChebyshevProfile::nodes(PROFILE_NODES, lo, hi);
                let mut hint = dirs[k];
                let samples: Vec<f64> = ts
                    .iter()
                    .map(|&t| {
                        let x = dirs[k];
                        let p = [e.center[0] + t * x[0], e.center[1] + t * x[1], e.center[2] + t * x[2]];
                        let (d, dir) = field.signed_distance_near(p, hint);
                        hint = dir;
                        d * t * t
                    })
                    .collect();
                ChebyshevProfile::from_samples(&samples, lo, hi, rho_e[k])
            })
            .collect();
        Ok(Self { rho_e, half_width, profiles })
    }

    #[inline]
    pub fn contains(&self, k: usize, r: f64) -> bool {
        self.profiles[k].contains(r)
    }

    /// `q(r)` at node `k`.
    #[inline]
    pub fn q(&self, k: usize, r: f64) -> f64 {
        self.profiles[k].value(r)
    }

    /// `∫_{ρ_E}^{r} q` at node `k`.
    #[inline]
    pub fn g(&self, k: usize, r: f64) -> f64 {
        self.profiles[k].integral(r)
    }

    /// Signed distance to `∂E` of the point at radius `r` along node `k`.
    #[inline]
    pub fn distance(&self, k: usize, r: f64) -> f64 {
        self.q(k, r) / (r * r)
    }

    /// Largest `|r_k − ρ_E,k| / δ`.
    pub fn band_usage(&self, rho: &[f64]) -> f64 {
        rho.iter()
            .zip(&self.rho_e)
            .map(|(r, e)| (r - e).abs() / self.half_width)
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_sphere_profile_is_exact() {
        let e = RadialSurface::unit_sphere(8);
        let g = S2Grid::new(8).unwrap();
        let p = DistanceProfile::build(&e, &g, 0.2).unwrap();
        for k in [0, 17, 200] {
            // q(t) = (t − 1) t², G(r) = ∫_1^r q
            let r: f64 = 1.13;
            let exact = (r.powi(4) / 4.0 - r.powi(3) / 3.0) - (0.25 - 1.0 / 3.0);
            assert!((p.g(k, r) - exact).abs() < 1e-13);
            assert!((p.distance(k, 0.9) + 0.1).abs() < 1e-13);
        }
    }
}
