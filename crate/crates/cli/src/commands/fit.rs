use std::f64::consts::PI;

use serde::Serialize;

use curvflow::vpmcf::{fit_log_linear, RateFit};

use super::{set, Outcome};
use crate::args::FitArgs;
use crate::config::{self, FitConfig};
use crate::export::{read_columns, write_json};
use crate::{CliError, Result};

#[derive(Debug, Serialize)]
struct FitOutput {
    observable: String,
    window: String,
    t_start: f64,
    t_end: f64,
    #[serde(flatten)]
    fit: RateFit,
}

fn column<'a>(columns: &'a [(String, Vec<Option<f64>>)], name: &str) -> Result<&'a [Option<f64>]> {
    columns
        .iter()
        .find(|(h, _)| h == name)
        .map(|(_, v)| v.as_slice())
        .ok_or_else(|| CliError::Config(format!("trace has no column '{name}'")))
}

/// `(t, y)` pairs of the observable; rows with a missing value are dropped.
pub fn observable_from_columns(
    columns: &[(String, Vec<Option<f64>>)],
    observable: &str,
    balls: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let t = column(columns, "t")?;
    let y: Vec<Option<f64>> = if observable == "perimeter_deficit" {
        let (p, v) = (column(columns, "P")?, column(columns, "volume")?);
        let n = balls.max(1) as f64;
        p.iter()
            .zip(v)
            .map(|(p, v)| Some(p.as_ref()? - n.cbrt() * (36.0 * PI * v.as_ref()?.powi(2)).cbrt()))
            .collect()
    } else {
        column(columns, observable)?.to_vec()
    };
    Ok(t.iter().zip(&y).filter_map(|(t, y)| Some(((*t)?, (*y)?))).unzip())
}

pub fn run(a: &FitArgs) -> Result<Outcome> {
    let mut cfg: FitConfig = config::load(a.common.config.as_deref())?;
    if a.input.is_some() {
        cfg.input = a.input.clone();
    }
    set(&mut cfg.observable, a.observable.clone());
    set(&mut cfg.balls, a.balls);
    set(&mut cfg.window, a.window.clone());

    let input = cfg.input.clone().ok_or_else(|| CliError::Config("fit needs --input".into()))?;
    let columns = read_columns(&input)?;
    let (t, y) = observable_from_columns(&columns, &cfg.observable, cfg.balls)?;
    if t.is_empty() {
        return Err(CliError::Config("trace has no rows".into()));
    }
    let start = match cfg.window.as_str() {
        "all" => 0,
        "trailing_half" => t.len() / 2,
        other => return Err(CliError::Config(format!("unknown window '{other}'"))),
    };
    let fit = fit_log_linear(&t[start..], &y[start..])?;
    let out = FitOutput {
        observable: cfg.observable.clone(),
        window: cfg.window.clone(),
        t_start: t[start],
        t_end: t[t.len() - 1],
        fit,
    };
    write_json(&a.common.out, &out)?;
    Ok(Outcome { config: config::snapshot(&cfg), seed: None, primary: a.common.out.clone(), outputs: vec![input, a.common.out.clone()] })
}
