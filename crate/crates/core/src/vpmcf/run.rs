use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::{cmc_deficit, report, GeometricReport, RadialSurface};

use super::mm::{diagnose, Discretization};
use super::profile::DistanceProfile;
use super::{direct_step, mm_step, MmConfig, StepDiag};

/// A run stops once the cmc deficit falls below this value.
pub const CONVERGED_CMC: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Mm,
    Direct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub t: f64,
    pub surface: RadialSurface,
    /// Diagnostics of the step that produced this surface (absent for the
    /// initial entry).
    pub diag: Option<StepDiag>,
    pub report: GeometricReport,
    pub delta_cmc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrace {
    pub h: f64,
    pub scheme: Scheme,
    pub entries: Vec<TraceEntry>,
    /// The run stopped early on the cmc criterion.
    pub converged: bool,
}

impl FlowTrace {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn last(&self) -> &TraceEntry {
        self.entries.last().expect("trace has an initial entry")
    }
}

fn entry(t: f64, surface: RadialSurface, diag: Option<StepDiag>) -> Result<TraceEntry> {
    let report = report(&surface)?;
    let delta_cmc = cmc_deficit(&surface)?.delta;
    Ok(TraceEntry { t, surface, diag, report, delta_cmc })
}

/// Diagnostics of a direct step, using a distance band sized to the actual
/// displacement.
fn direct_diagnostics(e: &RadialSurface, f: &RadialSurface, h: f64) -> Result<StepDiag> {
    let disc = Discretization::new(e.band_limit())?;
    let re = e.radii(&disc.grid)?;
    let rf = f.radii(&disc.grid)?;
    let shift = re.iter().zip(&rf).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let min_rho = re.iter().copied().fold(f64::INFINITY, f64::min);
    let width = (1.5 * shift).max(1e-6).min(0.5 * min_rho);
    let profile = DistanceProfile::build(e, &disc.grid, width)?;
    diagnose(e, f, h, &profile, &disc)
}

/// Run `⌊T/h⌋` steps of the chosen scheme from `initial`, stopping early
/// once the cmc deficit drops below [`CONVERGED_CMC`].
pub fn run(initial: &RadialSurface, config: &MmConfig, t_final: f64, scheme: Scheme) -> Result<FlowTrace> {
    config.validate()?;
    if !(t_final >= config.h) {
        return Err(Error::InvalidInput(format!("final time {t_final} is shorter than one step {}", config.h)));
    }
    let steps = (t_final / config.h + 1e-9).floor() as usize;
    let first = entry(0.0, initial.with_band_limit(config.band_limit), None)?;
    let mut converged = first.delta_cmc < CONVERGED_CMC;
    let mut entries = vec![first];
    for k in 1..=steps {
        if converged {
            break;
        }
        let e = &entries[k - 1].surface;
        let (f, diag) = match scheme {
            Scheme::Mm => mm_step(e, config)?,
            Scheme::Direct => {
                let f = direct_step(e, config.h)?;
                let diag = direct_diagnostics(e, &f, config.h)?;
                (f, diag)
            }
        };
        let next = entry(k as f64 * config.h, f, Some(diag))?;
        converged = next.delta_cmc < CONVERGED_CMC;
        entries.push(next);
    }
    Ok(FlowTrace { h: config.h, scheme, entries, converged })
}
