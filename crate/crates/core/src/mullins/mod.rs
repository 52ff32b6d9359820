//! Mullins–Sekerka flow on the flat torus: sharp radial interfaces carried
//! together with their voxel occupancies, a spectral Poisson solver for the
//! potential, the minimizing-movement step `min P(F) + (h/2)∫|DU_{F,E}|²`
//! at fixed volume, and the run-level diagnostics.

mod raster;
mod reports;
mod run;
mod step;
mod torus;

use serde::Serialize;

pub use raster::{rasterize, rasterize_balls, rasterize_uncorrected, ChiSet, SparseOccupancy, SUPERSAMPLE};
pub use reports::{
    density_estimate_report, holder_continuity_report, ms_alexandrov_check, DensityRow, HolderReport, MsAlexandrovRecord,
    DENSITY_SAMPLES,
};
pub use run::{ms_deficit_series, ms_fit_rate, ms_ledger, ms_run, MsLedger, MsLedgerRow, MsTrace, MsTraceEntry};
pub use step::{ms_dissipation, ms_mm_step, ms_mm_step_from, MsState};
pub use torus::{hminus1_norm, poisson_solve, Potential, TorusGrid};

use crate::s2core::S2Grid;
use crate::surface::RadialSurface;
use crate::{Error, Result};

/// Settings of one Mullins–Sekerka step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MsConfig {
    pub h: f64,
    pub band_limit: usize,
    /// Band-limited part of `‖U + H_F − λ‖_{L²(∂F)}` at which the step is
    /// converged.
    pub tolerance: f64,
    /// The step is also converged once that residual falls below this
    /// fraction of its value at `F = E`.
    pub relative_tolerance: f64,
    pub max_iterations: usize,
    /// Allowed excess in `P(F) + (h/2)D ≤ P(E)`.
    pub comparison_tol: f64,
}

impl Default for MsConfig {
    fn default() -> Self {
        Self { h: 0.01, band_limit: 16, tolerance: 1e-9, relative_tolerance: 1e-3, max_iterations: 60, comparison_tol: 1e-6 }
    }
}

impl MsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.tolerance > 0.0 && self.relative_tolerance >= 0.0 && self.comparison_tol >= 0.0) || self.max_iterations == 0 {
            return Err(Error::InvalidInput("time step, tolerances and iteration cap must be positive".into()));
        }
        S2Grid::new(self.band_limit).map(|_| ())
    }
}

/// Diagnostics of one step `E -> F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MsStepDiag {
    /// `D = ∫|DU|²`.
    pub dissipation: f64,
    /// `‖χ_F − χ_E‖_{H⁻¹}`, summed from the spectrum of the difference.
    pub hminus1: f64,
    /// Area average of `U + H_F` over `∂F`.
    pub lambda: f64,
    /// `‖U + H_F − λ‖_{L²(∂F)}`, including the content above the band
    /// limit that the coefficients cannot resolve.
    pub el_residual: f64,
    /// The same residual projected onto degrees up to the band limit; the
    /// step's convergence certificate.
    pub projected_residual: f64,
    pub perimeter_before: f64,
    pub perimeter_after: f64,
    pub mass: f64,
    /// Relative deviation of the mass of `F` from the target volume.
    pub mass_error: f64,
    pub poisson_residual: f64,
    pub iterations: usize,
    /// Largest radial or center displacement of any component.
    pub displacement: f64,
}

/// `∫ρ³/3` on the component's own grid.
pub fn sharp_volume(s: &RadialSurface) -> Result<f64> {
    let grid = s.grid()?;
    let rho = s.radii(&grid)?;
    let cubes: Vec<f64> = rho.iter().map(|r| r * r * r).collect();
    Ok(grid.integrate(&cubes)? / 3.0)
}
