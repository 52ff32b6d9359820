use serde::Serialize;

use curvflow::mullins::{
    density_estimate_report, holder_continuity_report, ms_alexandrov_check, ms_dissipation, ms_fit_rate, ms_ledger,
    ms_run, rasterize, DensityRow, HolderReport, MsAlexandrovRecord, MsLedger, MsTrace, TorusGrid,
};
use curvflow::surface::{curvature_fields, RadialSurface};
use curvflow::vpmcf::RateFit;

use super::{set, Outcome};
use crate::args::MsArgs;
use crate::config::{self, InitSpec, MsRunConfig};
use crate::export::{sibling, write_json, Cell, Table};
use crate::Result;

pub const MS_TRACE_COLUMNS: [&str; 11] = [
    "t",
    "P",
    "volume",
    "Hbar",
    "osc",
    "lambda",
    "D",
    "el_residual",
    "delta_cmc",
    "hminus1",
    "poisson_residual",
];

pub const MS_LEDGER_COLUMNS: [&str; 10] = [
    "step",
    "t",
    "perimeter_before",
    "perimeter_after",
    "dissipation",
    "comparison_slack",
    "hminus1",
    "identity_error",
    "mass_error",
    "poisson_residual",
];

/// Curvature summary of a union of components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnionCurvature {
    /// Area average of `H` over all components.
    pub hbar: f64,
    /// `Σ ∫(H − H̄)²` with the union's `H̄`.
    pub osc: f64,
    /// `sup |H/H⁰ − 1|` with `H⁰ = 2P/(3|E|)` of the union.
    pub delta_cmc: f64,
}

pub fn union_curvature(components: &[RadialSurface], volume: f64) -> Result<UnionCurvature> {
    let fields = components.iter().map(|s| curvature_fields(s, &s.grid()?)).collect::<curvflow::Result<Vec<_>>>()?;
    let (mut area, mut total_h, mut total_h2) = (0.0, 0.0, 0.0);
    for cf in &fields {
        area += cf.integrate_area(&vec![1.0; cf.len()]);
        total_h += cf.integrate_area(&cf.mean);
        total_h2 += cf.integrate_area(&cf.mean.iter().map(|h| h * h).collect::<Vec<_>>());
    }
    let hbar = total_h / area;
    let h0 = 2.0 * area / (3.0 * volume);
    let delta_cmc = fields.iter().flat_map(|cf| cf.mean.iter()).map(|h| (h / h0 - 1.0).abs()).fold(0.0, f64::max);
    Ok(UnionCurvature { hbar, osc: (total_h2 - total_h * hbar).max(0.0), delta_cmc })
}

pub fn ms_trace_table(trace: &MsTrace) -> Result<Table> {
    let mut t = Table::new(&MS_TRACE_COLUMNS);
    for e in &trace.entries {
        let c = union_curvature(&e.components, e.volume)?;
        let d = e.diag;
        t.push(vec![
            e.t.into(),
            e.perimeter.into(),
            e.volume.into(),
            c.hbar.into(),
            c.osc.into(),
            d.map(|d| d.lambda).into(),
            d.map(|d| d.dissipation).into(),
            d.map(|d| d.el_residual).into(),
            c.delta_cmc.into(),
            d.map(|d| d.hminus1).into(),
            d.map(|d| d.poisson_residual).into(),
        ]);
    }
    Ok(t)
}

pub fn ms_ledger_table(ledger: &MsLedger) -> Table {
    let mut t = Table::new(&MS_LEDGER_COLUMNS);
    for r in &ledger.rows {
        t.push(vec![
            r.step.into(),
            r.t.into(),
            r.perimeter_before.into(),
            r.perimeter_after.into(),
            r.dissipation.into(),
            r.comparison_slack.into(),
            r.hminus1.into(),
            r.identity_error.into(),
            r.mass_error.into(),
            r.poisson_residual.into(),
        ]);
    }
    t
}

pub fn holder_table(h: &HolderReport) -> Table {
    let mut t = Table::new(&["constant", "pairs", "worst"]);
    let worst = h.worst.map_or(Cell::Empty, |(i, j)| Cell::Text(format!("{i}:{j}")));
    t.push(vec![h.constant.into(), h.pairs.into(), worst]);
    t
}

#[derive(Debug, Serialize)]
struct Summary {
    steps: usize,
    ledger: serde_json::Value,
    deficit_fit: Option<RateFit>,
    holder: Option<HolderReport>,
    density: Vec<DensityRow>,
    final_alexandrov: Option<MsAlexandrovRecord>,
}

pub fn run(a: &MsArgs) -> Result<Outcome> {
    let mut cfg: MsRunConfig = config::load(a.common.config.as_deref())?;
    set(&mut cfg.init, a.init.clone());
    set(&mut cfg.radius, a.radius);
    set(&mut cfg.side, a.side);
    set(&mut cfg.resolution, a.n);
    set(&mut cfg.h, a.h);
    set(&mut cfg.t_final, a.t_final);
    set(&mut cfg.band_limit, a.band_limit);
    set(&mut cfg.tolerance, a.tolerance);

    let spec = InitSpec::parse(&cfg.init)?;
    let grid = TorusGrid::new(cfg.side, cfg.resolution)?;
    let mid = 0.5 * cfg.side;
    let initial = spec.components(cfg.band_limit, cfg.radius, [mid; 3])?;
    let ms = cfg.ms();
    let trace = ms_run(&initial, &grid, cfg.t_final, &ms)?;
    let ledger = ms_ledger(&trace, cfg.ledger_tol);
    let holder = holder_continuity_report(&trace).ok();
    let last = trace.last();
    let density = density_estimate_report(&last.components, &cfg.density_radii)?;
    let final_alexandrov = match trace.entries.len() {
        n if n >= 2 => {
            let e = rasterize(&trace.entries[n - 2].components, &grid)?;
            let f = rasterize(&last.components, &grid)?;
            let (_, u) = ms_dissipation(&f, &e, ms.h)?;
            ms_alexandrov_check(&last.components, &u).ok()
        }
        _ => None,
    };

    let out = &a.common.out;
    ms_trace_table(&trace)?.write(out)?;
    let ledger_path = sibling(out, "ledger", "csv");
    ms_ledger_table(&ledger).write(&ledger_path)?;
    let mut outputs = vec![out.clone(), ledger_path];
    if let Some(h) = &holder {
        let holder_path = sibling(out, "holder", "csv");
        holder_table(h).write(&holder_path)?;
        outputs.push(holder_path);
    }
    let mut ledger_json = serde_json::to_value(&ledger)?;
    if let Some(map) = ledger_json.as_object_mut() {
        map.remove("rows");
    }
    let summary = Summary {
        steps: trace.len() - 1,
        ledger: ledger_json,
        deficit_fit: ms_fit_rate(&trace).ok(),
        holder,
        density,
        final_alexandrov,
    };
    let summary_path = sibling(out, "summary", "json");
    write_json(&summary_path, &summary)?;
    outputs.push(summary_path);
    Ok(Outcome { config: config::snapshot(&cfg), seed: spec.seed(), primary: out.clone(), outputs })
}
