use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::s2core::ShCoeffs;
use crate::surface::{curvature_fields, report, RadialSurface};

/// Largest perimeter increase tolerated before a direct step is rejected.
const PERIMETER_RISE_TOL: f64 = 1e-6;

/// Options for [`direct_step_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectConfig {
    pub dt: f64,
    /// Restore the enclosed volume by a dilation after the update.
    pub renormalize: bool,
}

/// Coefficients of the radial velocity `∂_t ρ` that realizes the normal
/// velocity `H̄ − H` on a radial graph.
pub fn normal_velocity(e: &RadialSurface) -> Result<ShCoeffs> {
    let grid = e.grid()?;
    let cf = curvature_fields(e, &grid)?;
    let area = cf.integrate_area(&vec![1.0; cf.len()]);
    let hbar = cf.integrate_area(&cf.mean) / area;
    let v: Vec<f64> = (0..cf.len())
        .map(|k| (hbar - cf.mean[k]) * cf.area_density[k] / (cf.rho[k] * cf.rho[k]))
        .collect();
    grid.analyze(&v)
}

/// Semi-implicit spectral step of `V = H̄ − H`: the linearization about the
/// sphere of equal volume is treated implicitly, the remainder explicitly,
/// followed by a dilation back to the original volume.
pub fn direct_step(e: &RadialSurface, dt: f64) -> Result<RadialSurface> {
    direct_step_with(e, DirectConfig { dt, renormalize: true })
}

pub fn direct_step_with(e: &RadialSurface, config: DirectConfig) -> Result<RadialSurface> {
    if !(config.dt > 0.0) {
        return Err(Error::InvalidInput(format!("time step must be positive, got {}", config.dt)));
    }
    let before = report(e)?;
    let velocity = normal_velocity(e)?;
    let mean_radius = (3.0 * before.volume / (4.0 * PI)).cbrt();
    let dt = config.dt;
    let mut next = e.coeffs.clone();
    for (l, m, a) in e.coeffs.iter() {
        let lin = if l >= 2 { -(((l - 1) * (l + 2)) as f64) / (mean_radius * mean_radius) } else { 0.0 };
        let value = (a + dt * (velocity.get(l, m) - lin * a)) / (1.0 - dt * lin);
        next.set(l, m, value);
    }
    let mut f = RadialSurface::new(e.center, next);
    if config.renormalize {
        f = f.with_volume(before.volume)?;
    }
    let after = report(&f)?;
    if after.perimeter > before.perimeter + PERIMETER_RISE_TOL {
        return Err(Error::StepRejected(format!(
            "perimeter rose from {:.12e} to {:.12e}",
            before.perimeter, after.perimeter
        )));
    }
    Ok(f)
}
