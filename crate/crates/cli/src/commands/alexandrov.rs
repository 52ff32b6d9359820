use curvflow::alexandrov::{sharpness_probe, sweep as run_sweep};

use super::{set, Outcome};
use crate::args::{SharpnessArgs, SweepArgs};
use crate::config::{self, SharpnessConfig, SweepConfig};
use crate::export::{sibling, write_json, Cell, Table};
use crate::Result;

const SWEEP_COLUMNS: [&str; 9] = ["seed", "l_min", "l_max", "amplitude", "lhs", "rhs", "ratio", "perimeter", "admissible"];

pub fn sweep(a: &SweepArgs) -> Result<Outcome> {
    let mut cfg: SweepConfig = config::load(a.common.config.as_deref())?;
    set(&mut cfg.n_samples, a.n);
    set(&mut cfg.seed, a.seed);
    set(&mut cfg.l_min, a.lmin);
    set(&mut cfg.l_max, a.lmax);
    set(&mut cfg.amplitude, a.amp);
    set(&mut cfg.delta0, a.delta0);
    set(&mut cfg.band_limit, a.band_limit);

    let result = run_sweep(&(&cfg).into())?;
    let mut table = Table::new(&SWEEP_COLUMNS);
    for r in &result.records {
        table.push(vec![
            r.seed.into(),
            r.l_min.into(),
            r.l_max.into(),
            r.amplitude.into(),
            r.lhs.into(),
            r.rhs.into(),
            r.ratio.into(),
            r.perimeter.into(),
            r.admissible.into(),
        ]);
    }
    // summary row: the empirical constant in the ratio column, the admissible count last
    let s = &result.summary;
    table.push(vec![
        Cell::Text("summary".into()),
        cfg.l_min.into(),
        cfg.l_max.into(),
        cfg.amplitude.into(),
        Cell::Empty,
        Cell::Empty,
        s.empirical_c.into(),
        Cell::Empty,
        s.admissible.into(),
    ]);
    table.write(&a.common.out)?;
    let summary_path = sibling(&a.common.out, "summary", "json");
    write_json(&summary_path, s)?;
    Ok(Outcome {
        config: config::snapshot(&cfg),
        seed: Some(cfg.seed),
        primary: a.common.out.clone(),
        outputs: vec![a.common.out.clone(), summary_path],
    })
}

pub fn sharpness(a: &SharpnessArgs) -> Result<Outcome> {
    let mut cfg: SharpnessConfig = config::load(a.common.config.as_deref())?;
    if let Some((l, m)) = a.mode {
        cfg.l = l;
        cfg.m = m;
    }
    set(&mut cfg.amplitudes, a.eps.clone());
    set(&mut cfg.p, a.p);
    set(&mut cfg.band_limit, a.band_limit);

    let t = sharpness_probe(cfg.l, cfg.m, &cfg.amplitudes, cfg.p, cfg.band_limit)?;
    let mut table = Table::new(&["amplitude", "lhs", "rhs", "ratio", "ratio_p"]);
    for r in &t.rows {
        table.push(vec![r.amplitude.into(), r.lhs.into(), r.rhs.into(), r.ratio.into(), r.ratio_p.into()]);
    }
    table.write(&a.common.out)?;
    Ok(Outcome {
        config: config::snapshot(&cfg),
        seed: None,
        primary: a.common.out.clone(),
        outputs: vec![a.common.out.clone()],
    })
}
