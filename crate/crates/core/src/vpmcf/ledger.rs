use serde::Serialize;

use super::FlowTrace;

/// Dissipations below this are treated as zero when forming ratios.
const DISSIPATION_FLOOR: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LedgerRow {
    pub step: usize,
    pub t: f64,
    pub perimeter_before: f64,
    pub perimeter_after: f64,
    pub dissipation: f64,
    /// `P(E_k) − P(E_{k+1}) − D/h`; nonnegative when the comparison holds.
    pub comparison_slack: f64,
    pub comparison_holds: bool,
    pub osc: f64,
    pub distance_sq: f64,
    /// `∫_{∂F} d_E² / D`, or NaN when `D` vanishes.
    pub distance_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DissipationLedger {
    pub rows: Vec<LedgerRow>,
    pub tolerance: f64,
    pub comparison_holds: bool,
    /// `Σ_k h·osc(E_k)` over the post-step surfaces.
    pub cumulative_h_osc: f64,
    /// Largest `∫ d_E² / D` over steps with nonzero dissipation.
    pub empirical_distance_constant: f64,
    /// `Σ_k D_k / h`.
    pub total_dissipation: f64,
    pub initial_perimeter: f64,
    pub final_perimeter: f64,
    /// `Σ D_k/h ≤ P(E_0) − P(E_final) + tol`.
    pub telescoping_holds: bool,
    pub dissipation_to_perimeter: f64,
    pub h_osc_to_perimeter: f64,
}

/// Check the per-step comparison `P(E_{k+1}) + D/h ≤ P(E_k) + tol` and
/// accumulate the dissipation bounds over a trace.
pub fn dissipation_ledger(trace: &FlowTrace, tolerance: f64) -> DissipationLedger {
    let h = trace.h;
    let mut rows = Vec::with_capacity(trace.len().saturating_sub(1));
    for (k, pair) in trace.entries.windows(2).enumerate() {
        let (prev, next) = (&pair[0], &pair[1]);
        let Some(d) = next.diag else { continue };
        let slack = prev.report.perimeter - next.report.perimeter - d.dissipation / h;
        rows.push(LedgerRow {
            step: k + 1,
            t: next.t,
            perimeter_before: prev.report.perimeter,
            perimeter_after: next.report.perimeter,
            dissipation: d.dissipation,
            comparison_slack: slack,
            comparison_holds: slack >= -tolerance,
            osc: next.report.osc,
            distance_sq: d.distance_sq,
            distance_ratio: if d.dissipation > DISSIPATION_FLOOR { d.distance_sq / d.dissipation } else { f64::NAN },
        });
    }
    let initial_perimeter = trace.entries[0].report.perimeter;
    let final_perimeter = trace.last().report.perimeter;
    let total_dissipation: f64 = rows.iter().map(|r| r.dissipation / h).sum();
    let cumulative_h_osc: f64 = rows.iter().map(|r| h * r.osc).sum();
    let empirical_distance_constant =
        rows.iter().map(|r| r.distance_ratio).filter(|v| v.is_finite()).fold(0.0, f64::max);
    DissipationLedger {
        comparison_holds: rows.iter().all(|r| r.comparison_holds),
        telescoping_holds: total_dissipation <= initial_perimeter - final_perimeter + tolerance,
        rows,
        tolerance,
        cumulative_h_osc,
        empirical_distance_constant,
        total_dissipation,
        initial_perimeter,
        final_perimeter,
        dissipation_to_perimeter: total_dissipation / initial_perimeter,
        h_osc_to_perimeter: cumulative_h_osc / initial_perimeter,
    }
}
