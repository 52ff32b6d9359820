use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_interval;
use crate::s2core::S2Grid;
use crate::surface::{DistanceField, RadialSurface};

pub const DEFAULT_RADIAL_NODES: usize = 16;

/// `D(F, E) = ∫_{FΔE} |d_E|`, integrated along rays from the common center
/// with Gauss–Legendre quadrature between the two radii.
pub fn dissipation(f: &RadialSurface, e: &RadialSurface, radial_nodes: usize) -> Result<f64> {
    if f.center != e.center {
        return Err(Error::CenterMismatch);
    }
    let grid = S2Grid::new(f.band_limit().max(e.band_limit()))?;
    let rf = f.radii(&grid)?;
    let re = e.radii(&grid)?;
    for (k, r) in rf.iter().chain(&re).enumerate() {
        if !(*r > 0.0) {
            return Err(Error::NotStarShaped { node: k % grid.len(), value: *r });
        }
    }
    let field = DistanceField::new(e)?;
    let dirs = grid.nodes();
    let per_node: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let (lo, hi) = (rf[k].min(re[k]), rf[k].max(re[k]));
            if hi - lo <= 0.0 {
                return 0.0;
            }
            let x = dirs[k];
            let mut hint = x;
            gauss_legendre_interval(radial_nodes, lo, hi)
                .into_iter()
                .map(|(s, w)| {
                    let p = [e.center[0] + s * x[0], e.center[1] + s * x[1], e.center[2] + s * x[2]];
                    let (d, dir) = field.signed_distance_near(p, hint);
                    hint = dir;
                    w * d.abs() * s * s
                })
                .sum()
        })
        .collect();
    Ok(grid.integrate_unchecked(&per_node))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_surfaces() {
        let e = RadialSurface::from_mode(8, 2, 0, 0.1).unwrap();
        assert_eq!(dissipation(&e, &e, 16).unwrap(), 0.0);
    }

    #[test]
    fn center_mismatch() {
        let e = RadialSurface::unit_sphere(8);
        let f = e.translated([0.1, 0.0, 0.0]);
        assert_eq!(dissipation(&f, &e, 16).unwrap_err(), Error::CenterMismatch);
    }
}
