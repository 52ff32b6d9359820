use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::BallUnion;

use super::hausdorff::{hausdorff_to_union, Sampling};
use super::FlowTrace;

/// Observable values at or below this are excluded from log fits.
pub const FIT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// Isoperimetric deficit `P − (36π|E|²)^{1/3}`.
    PerimeterDeficit,
    /// Hausdorff distance to the ball fitted to the final surface.
    Hausdorff,
    Osc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFit {
    /// Slope of `log(observable)` against time.
    pub rate: f64,
    pub intercept: f64,
    /// `None` when the observable is constant on the window.
    pub r_squared: Option<f64>,
    pub points: usize,
}

/// Least-squares fit of `log y = intercept + rate·t` over points with
/// `y > FIT_FLOOR`.
pub fn fit_log_linear(t: &[f64], y: &[f64]) -> Result<RateFit> {
    let pts: Vec<(f64, f64)> = t.iter().zip(y).filter(|(_, v)| **v > FIT_FLOOR).map(|(a, v)| (*a, v.ln())).collect();
    if pts.len() < 3 {
        return Err(Error::NonPositiveObservable);
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sty: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if !(stt > 0.0) {
        return Err(Error::InvalidInput("fit window has a single time".into()));
    }
    let rate = sty / stt;
    let intercept = my - rate * mt;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - intercept - rate * p.0).powi(2)).sum();
    let r_squared = (syy > 1e-28 * n).then(|| 1.0 - ss_res / syy);
    Ok(RateFit { rate, intercept, r_squared, points: pts.len() })
}

/// Observable values along a trace.
pub fn observable_series(trace: &FlowTrace, observable: Observable) -> Result<Vec<f64>> {
    match observable {
        Observable::PerimeterDeficit => Ok(trace
            .entries
            .iter()
            .map(|e| e.report.perimeter - (36.0 * std::f64::consts::PI * e.report.volume.powi(2)).cbrt())
            .collect()),
        Observable::Osc => Ok(trace.entries.iter().map(|e| e.report.osc).collect()),
        Observable::Hausdorff => {
            let last = &trace.last().report;
            let radius = (3.0 * last.volume / (4.0 * std::f64::consts::PI)).cbrt();
            let target = BallUnion::new(vec![last.barycenter], radius);
            trace
                .entries
                .iter()
                .map(|e| hausdorff_to_union(std::slice::from_ref(&e.surface), &target, Sampling::Grid))
                .collect()
        }
    }
}

/// Log-linear fit of an observable over the trailing half of a trace.
pub fn fit_rate(trace: &FlowTrace, observable: Observable) -> Result<RateFit> {
    let values = observable_series(trace, observable)?;
    let start = trace.len() / 2;
    let t: Vec<f64> = trace.entries[start..].iter().map(|e| e.t).collect();
    fit_log_linear(&t, &values[start..])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecayCheck {
    /// `Σ_{k≥i} a_k ≤ C a_i` at every index.
    pub hypothesis_holds: bool,
    /// `Σ_{k≥i} a_k ≤ (1 − 1/C)^i Σ_k a_k` at every index.
    pub conclusion_holds: bool,
    /// First index where the hypothesis fails.
    pub first_violation: Option<usize>,
}

impl DecayCheck {
    pub fn passed(&self) -> bool {
        self.hypothesis_holds && self.conclusion_holds
    }
}

/// Check the tail-domination hypothesis `Σ_{k≥i} a_k ≤ C a_i` and, when it
/// holds, the geometric tail bound it implies.
pub fn geometric_decay_check(a: &[f64], c: f64) -> Result<DecayCheck> {
    if !(c > 1.0) {
        return Err(Error::InvalidInput(format!("decay constant must exceed 1, got {c}")));
    }
    if a.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::InvalidInput("sequence must be non-negative".into()));
    }
    let mut tails = vec![0.0; a.len() + 1];
    for i in (0..a.len()).rev() {
        tails[i] = tails[i + 1] + a[i];
    }
    let slack = |x: f64| 1e-12 * x.abs().max(f64::MIN_POSITIVE);
    let first_violation = (0..a.len()).find(|&i| tails[i] > c * a[i] + slack(tails[i]));
    if first_violation.is_some() {
        return Ok(DecayCheck { hypothesis_holds: false, conclusion_holds: false, first_violation });
    }
    let q = 1.0 - 1.0 / c;
    let conclusion_holds = (0..a.len()).all(|i| tails[i] <= q.powi(i as i32) * tails[0] + slack(tails[0]));
    Ok(DecayCheck { hypothesis_holds: true, conclusion_holds, first_violation: None })
}
