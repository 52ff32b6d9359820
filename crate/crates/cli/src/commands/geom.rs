use serde::Serialize;

use curvflow::surface::{cmc_deficit, report as geometric_report, GeometricReport};

use super::{set, Outcome};
use crate::args::GeomArgs;
use crate::config::{self, GeomConfig, InitSpec};
use crate::export::write_json;
use crate::{CliError, Result};

#[derive(Debug, Serialize)]
struct GeomOutput {
    #[serde(flatten)]
    report: GeometricReport,
    h0: f64,
    delta_cmc: f64,
}

pub fn report(a: &GeomArgs) -> Result<Outcome> {
    let mut cfg: GeomConfig = config::load(a.common.config.as_deref())?;
    set(&mut cfg.init, a.init.clone());
    match (a.mode, a.amp) {
        (Some((l, m)), amp) => cfg.init = format!("mode:{l},{m}:{}", amp.unwrap_or(0.1)),
        (None, Some(_)) => return Err(CliError::Config("--amp needs --mode".into())),
        (None, None) => {}
    }
    set(&mut cfg.band_limit, a.band_limit);
    set(&mut cfg.normalize, a.normalize);

    let spec = InitSpec::parse(&cfg.init)?;
    let mut s = spec.surface(cfg.band_limit)?;
    if cfg.normalize {
        s = s.normalize()?;
    }
    let cmc = cmc_deficit(&s)?;
    let out = GeomOutput { report: geometric_report(&s)?, h0: cmc.h0, delta_cmc: cmc.delta };
    write_json(&a.common.out, &out)?;
    Ok(Outcome {
        config: config::snapshot(&cfg),
        seed: spec.seed(),
        primary: a.common.out.clone(),
        outputs: vec![a.common.out.clone()],
    })
}
