//! Volume-preserving mean curvature flow: the minimizing-movement step
//! `min P(F) + (1/h)∫_F d_E` over radial graphs at fixed volume, a direct
//! semi-implicit stepper for cross-validation, and the diagnostics ledger.

mod direct;
mod dissipation;
mod fit;
mod hausdorff;
mod ledger;
mod mm;
mod optim;
mod profile;
mod run;

use serde::Serialize;

pub use direct::{direct_step, direct_step_with, normal_velocity, DirectConfig};
pub use dissipation::{dissipation, DEFAULT_RADIAL_NODES};
pub use fit::{fit_log_linear, fit_rate, geometric_decay_check, observable_series, DecayCheck, Observable, RateFit, FIT_FLOOR};
pub use hausdorff::{hausdorff_to_union, Sampling, DEFAULT_HAUSDORFF_SAMPLES};
pub use ledger::{dissipation_ledger, DissipationLedger, LedgerRow};
pub use mm::mm_step;
pub use optim::{lbfgs, LbfgsOptions, LbfgsResult};
pub use run::{run, FlowTrace, Scheme, TraceEntry, CONVERGED_CMC};

/// Settings of one minimizing-movement step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MmConfig {
    /// Time step.
    pub h: f64,
    pub band_limit: usize,
    /// Sup norm of the reduced gradient at which the optimizer stops.
    pub gradient_tol: f64,
    pub max_iterations: usize,
    /// Relative tolerance of the volume projection.
    pub volume_tol: f64,
}

impl Default for MmConfig {
    fn default() -> Self {
        Self { h: 0.01, band_limit: 16, gradient_tol: 1e-10, max_iterations: 500, volume_tol: 1e-14 }
    }
}

impl MmConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.h > 0.0 && self.gradient_tol > 0.0 && self.volume_tol > 0.0) || self.max_iterations == 0 {
            return Err(crate::Error::InvalidInput(
                "time step, tolerances and iteration cap must be positive".into(),
            ));
        }
        crate::s2core::S2Grid::new(self.band_limit).map(|_| ())
    }
}

/// Diagnostics of one step `E -> F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepDiag {
    /// Area average of `d_E/h + H_F` over `∂F`.
    pub lambda: f64,
    /// `∫_{FΔE} |d_E|`.
    pub dissipation: f64,
    /// `‖d_E/h + H_F − λ‖_{L²(∂F)}`.
    pub el_residual: f64,
    /// `∫_{∂F} d_E²`.
    pub distance_sq: f64,
    pub perimeter_before: f64,
    pub perimeter_after: f64,
    /// `(|F| − |E|)/|E|`.
    pub volume_drift: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
}
