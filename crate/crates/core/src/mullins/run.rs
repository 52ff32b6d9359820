//! Fixed-step Mullins–Sekerka runs and their ledger.

use std::f64::consts::PI;

use serde::Serialize;

use super::raster::SparseOccupancy;
use super::step::{ms_mm_step_from, MsState};
use super::torus::TorusGrid;
use super::{MsConfig, MsStepDiag};
use crate::surface::RadialSurface;
use crate::vpmcf::{fit_log_linear, RateFit};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct MsTraceEntry {
    pub t: f64,
    pub components: Vec<RadialSurface>,
    pub occupancy: SparseOccupancy,
    pub perimeter: f64,
    /// Sharp volume.
    pub volume: f64,
    /// Mass of the occupancies.
    pub mass: f64,
    /// Diagnostics of the step that produced this entry.
    pub diag: Option<MsStepDiag>,
}

impl MsTraceEntry {
    /// `P − N^{1/3}·P(ball of the same total volume)`, `N` the component count.
    pub fn perimeter_deficit(&self) -> f64 {
        let n = self.components.len().max(1) as f64;
        self.perimeter - n.cbrt() * (36.0 * PI * self.volume * self.volume).cbrt()
    }
}

#[derive(Debug, Clone)]
pub struct MsTrace {
    pub h: f64,
    pub config: MsConfig,
    /// Mass every occupancy is held to.
    pub target_mass: f64,
    pub entries: Vec<MsTraceEntry>,
}

impl MsTrace {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn last(&self) -> &MsTraceEntry {
        self.entries.last().expect("trace has an initial entry")
    }
}

fn entry(t: f64, state: &MsState, diag: Option<MsStepDiag>) -> Result<MsTraceEntry> {
    Ok(MsTraceEntry {
        t,
        components: state.components.clone(),
        occupancy: state.chi.sparse(),
        perimeter: state.perimeter()?,
        volume: state.volume()?,
        mass: state.chi.mass(),
        diag,
    })
}

/// Linear extrapolation of the last step, damped by the ratio of the last two
/// displacements.
fn extrapolate(prev: &[RadialSurface], cur: &[RadialSurface], ratio: f64) -> Vec<RadialSurface> {
    prev.iter()
        .zip(cur)
        .map(|(p, c)| {
            let mut coeffs = c.coeffs.clone();
            for (a, b) in coeffs.as_mut_slice().iter_mut().zip(p.coeffs.as_slice()) {
                *a += ratio * (*a - b);
            }
            let mut center = c.center;
            for k in 0..3 {
                center[k] += ratio * (c.center[k] - p.center[k]);
            }
            RadialSurface::new(center, coeffs)
        })
        .collect()
}

/// `⌊T/h⌋` steps from `initial`.
pub fn ms_run(initial: &[RadialSurface], grid: &TorusGrid, t_final: f64, config: &MsConfig) -> Result<MsTrace> {
    config.validate()?;
    if !(t_final >= config.h) {
        return Err(Error::InvalidInput(format!("final time {t_final} is shorter than the time step")));
    }
    let steps = (t_final / config.h + 1e-9).floor() as usize;
    let components: Vec<RadialSurface> = initial.iter().map(|s| s.with_band_limit(config.band_limit)).collect();
    let mut state = MsState::new(components, grid)?;
    let target_mass = state.chi.volume;
    let mut entries = vec![entry(0.0, &state, None)?];
    let mut previous: Option<Vec<RadialSurface>> = None;
    let mut last_displacement = 0.0;
    for k in 1..=steps {
        let guess = previous.as_ref().map(|p| {
            let ratio = entries.last().and_then(|e| e.diag).map_or(0.0, |d| {
                if last_displacement > 0.0 {
                    (d.displacement / last_displacement).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            });
            extrapolate(p, &state.components, ratio)
        });
        let (next, diag) = ms_mm_step_from(&state, guess, config)?;
        if let Some(d) = entries.last().and_then(|e| e.diag) {
            last_displacement = d.displacement;
        }
        previous = Some(std::mem::replace(&mut state, next).components);
        entries.push(entry(k as f64 * config.h, &state, Some(diag))?);
    }
    Ok(MsTrace { h: config.h, config: *config, target_mass, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MsLedgerRow {
    pub step: usize,
    pub t: f64,
    pub perimeter_before: f64,
    pub perimeter_after: f64,
    pub dissipation: f64,
    /// `P(E) − P(F) − (h/2)D`, nonnegative when the comparison holds.
    pub comparison_slack: f64,
    pub hminus1: f64,
    /// `|‖χ_F − χ_E‖²_{H⁻¹} − h²D| / (h²D)`.
    pub identity_error: f64,
    pub mass_error: f64,
    pub poisson_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MsLedger {
    pub rows: Vec<MsLedgerRow>,
    pub tolerance: f64,
    pub comparison_holds: bool,
    pub perimeter_monotone: bool,
    pub max_mass_error: f64,
    pub max_identity_error: f64,
    pub max_poisson_residual: f64,
    /// `(h/2) Σ D_k`.
    pub cumulative_dissipation: f64,
    pub initial_perimeter: f64,
    pub final_perimeter: f64,
    pub telescoping_holds: bool,
}

/// Per-step energy comparison, perimeter monotonicity, mass, `H⁻¹`
/// identity and the telescoped dissipation bound.
pub fn ms_ledger(trace: &MsTrace, tolerance: f64) -> MsLedger {
    let h = trace.h;
    let mut rows = Vec::new();
    for (k, e) in trace.entries.iter().enumerate().skip(1) {
        let Some(d) = e.diag else { continue };
        let expected = h * h * d.dissipation;
        let identity_error = if expected > 0.0 {
            (d.hminus1 * d.hminus1 - expected).abs() / expected
        } else {
            d.hminus1 * d.hminus1
        };
        rows.push(MsLedgerRow {
            step: k,
            t: e.t,
            perimeter_before: d.perimeter_before,
            perimeter_after: d.perimeter_after,
            dissipation: d.dissipation,
            comparison_slack: d.perimeter_before - d.perimeter_after - 0.5 * h * d.dissipation,
            hminus1: d.hminus1,
            identity_error,
            mass_error: (e.mass - trace.target_mass).abs() / trace.target_mass,
            poisson_residual: d.poisson_residual,
        });
    }
    let comparison_holds = rows.iter().all(|r| r.comparison_slack >= -tolerance);
    let perimeter_monotone = rows.iter().all(|r| r.perimeter_after <= r.perimeter_before + tolerance);
    let max = |f: fn(&MsLedgerRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let max_mass_error = max(|r| r.mass_error);
    let max_identity_error = max(|r| r.identity_error);
    let max_poisson_residual = max(|r| r.poisson_residual);
    let cumulative_dissipation = 0.5 * h * rows.iter().map(|r| r.dissipation).sum::<f64>();
    let initial_perimeter = trace.entries.first().map_or(0.0, |e| e.perimeter);
    let final_perimeter = trace.entries.last().map_or(0.0, |e| e.perimeter);
    MsLedger {
        telescoping_holds: cumulative_dissipation <= initial_perimeter - final_perimeter + tolerance,
        rows,
        tolerance,
        comparison_holds,
        perimeter_monotone,
        max_mass_error,
        max_identity_error,
        max_poisson_residual,
        cumulative_dissipation,
        initial_perimeter,
        final_perimeter,
    }
}

/// Times and perimeter deficits along a trace.
pub fn ms_deficit_series(trace: &MsTrace) -> (Vec<f64>, Vec<f64>) {
    trace.entries.iter().map(|e| (e.t, e.perimeter_deficit())).unzip()
}

/// Log-linear fit of the perimeter deficit over the trailing half.
pub fn ms_fit_rate(trace: &MsTrace) -> Result<RateFit> {
    let (t, y) = ms_deficit_series(trace);
    let start = trace.len() / 2;
    fit_log_linear(&t[start..], &y[start..])
}
