use serde::Serialize;

use curvflow::vpmcf::{dissipation_ledger, fit_rate, run as run_flow, DissipationLedger, FlowTrace, Observable, RateFit};

use super::{set, Outcome};
use crate::args::VpmcfArgs;
use crate::config::{self, InitSpec, VpmcfConfig};
use crate::export::{sibling, write_json, Cell, Table};
use crate::Result;

pub const TRACE_COLUMNS: [&str; 9] = ["t", "P", "volume", "Hbar", "osc", "lambda", "D", "el_residual", "delta_cmc"];

pub const LEDGER_COLUMNS: [&str; 10] = [
    "step",
    "t",
    "perimeter_before",
    "perimeter_after",
    "dissipation",
    "comparison_slack",
    "comparison_holds",
    "osc",
    "distance_sq",
    "distance_ratio",
];

pub fn trace_table(trace: &FlowTrace) -> Table {
    let mut t = Table::new(&TRACE_COLUMNS);
    for e in &trace.entries {
        let d = e.diag;
        t.push(vec![
            e.t.into(),
            e.report.perimeter.into(),
            e.report.volume.into(),
            e.report.hbar.into(),
            e.report.osc.into(),
            d.map(|d| d.lambda).into(),
            d.map(|d| d.dissipation).into(),
            d.map(|d| d.el_residual).into(),
            e.delta_cmc.into(),
        ]);
    }
    t
}

pub fn ledger_table(ledger: &DissipationLedger) -> Table {
    let mut t = Table::new(&LEDGER_COLUMNS);
    for r in &ledger.rows {
        t.push(vec![
            r.step.into(),
            r.t.into(),
            r.perimeter_before.into(),
            r.perimeter_after.into(),
            r.dissipation.into(),
            r.comparison_slack.into(),
            r.comparison_holds.into(),
            r.osc.into(),
            r.distance_sq.into(),
            if r.distance_ratio.is_nan() { Cell::Empty } else { r.distance_ratio.into() },
        ]);
    }
    t
}

#[derive(Debug, Serialize)]
struct Summary {
    converged: bool,
    steps: usize,
    ledger: serde_json::Value,
    deficit_fit: Option<RateFit>,
    osc_fit: Option<RateFit>,
}

pub fn run(a: &VpmcfArgs) -> Result<Outcome> {
    let mut cfg: VpmcfConfig = config::load(a.common.config.as_deref())?;
    set(&mut cfg.init, a.init.clone());
    set(&mut cfg.normalize, a.normalize);
    set(&mut cfg.h, a.h);
    set(&mut cfg.t_final, a.t_final);
    set(&mut cfg.scheme, a.scheme.clone());
    set(&mut cfg.band_limit, a.band_limit);
    set(&mut cfg.gradient_tol, a.gradient_tol);

    let spec = InitSpec::parse(&cfg.init)?;
    let mut initial = spec.surface(cfg.band_limit)?;
    if cfg.normalize {
        initial = initial.normalize()?;
    }
    let trace = run_flow(&initial, &cfg.mm(), cfg.t_final, cfg.scheme()?)?;
    let ledger = dissipation_ledger(&trace, cfg.ledger_tol);

    let out = &a.common.out;
    trace_table(&trace).write(out)?;
    let ledger_path = sibling(out, "ledger", "csv");
    ledger_table(&ledger).write(&ledger_path)?;
    let mut ledger_json = serde_json::to_value(&ledger)?;
    if let Some(map) = ledger_json.as_object_mut() {
        map.remove("rows");
    }
    let summary = Summary {
        converged: trace.converged,
        steps: trace.len() - 1,
        ledger: ledger_json,
        deficit_fit: fit_rate(&trace, Observable::PerimeterDeficit).ok(),
        osc_fit: fit_rate(&trace, Observable::Osc).ok(),
    };
    let summary_path = sibling(out, "summary", "json");
    write_json(&summary_path, &summary)?;
    Ok(Outcome {
        config: config::snapshot(&cfg),
        seed: spec.seed(),
        primary: out.clone(),
        outputs: vec![out.clone(), ledger_path, summary_path],
    })
}
