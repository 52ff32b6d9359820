use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn curvflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvflow")).args(args).output().expect("spawn curvflow")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn geom_report_writes_all_fields_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = curvflow(&["geom", "report", "--mode", "2,0", "--amp", "0.1", "--L", "16", "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out);
    for key in [
        "perimeter",
        "volume",
        "volume_divergence",
        "hbar",
        "osc",
        "traceless_energy",
        "willmore",
        "mean_curvature_sq",
        "total_gauss_curvature",
        "barycenter",
        "diameter",
        "h0",
        "delta_cmc",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let m = read_json(&dir.path().join("report.json.manifest.json"));
    assert_eq!(m["config"]["init"], "mode:2,0:0.1");
    assert_eq!(m["config"]["band_limit"], 16);
    assert!(m["outputs"].as_array().unwrap().len() == 1);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = curvflow(&["geom", "report", "--bogus", "--out", "x.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(curvflow(&["nonsense"]).status.code(), Some(1));
}

#[test]
fn invalid_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"band_limit": 8, "bogus": 1}"#).unwrap();
    let out = dir.path().join("r.json");
    let o = curvflow(&["geom", "report", "--config", path_str(&cfg), "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
    assert!(!out.exists());

    let o = curvflow(&["geom", "report", "--init", "mode:2", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn numerical_failure_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = curvflow(&["geom", "report", "--mode", "2,0", "--amp", "5", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("star-shaped"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"init": "mode:3,1:0.05", "band_limit": 8}"#).unwrap();
    let out = dir.path().join("r.json");
    let o = curvflow(&["geom", "report", "--config", path_str(&cfg), "--L", "12", "--out", path_str(&out)]);
    assert!(o.status.success());
    let m = read_json(&dir.path().join("r.json.manifest.json"));
    assert_eq!(m["config"]["init"], "mode:3,1:0.05");
    assert_eq!(m["config"]["band_limit"], 12);
}

#[test]
fn sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = curvflow(&["alexandrov", "sweep", "--n", "6", "--seed", "42", "--lmin", "2", "--lmax", "4", "--amp", "0.1", "--L", "12", "--out", path_str(&out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(&out).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "seed,l_min,l_max,amplitude,lhs,rhs,ratio,perimeter,admissible");
    assert_eq!(lines.len(), 1 + 6 + 1);
    assert!(lines[7].starts_with("summary,"));
}

#[test]
fn vpmcf_run_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let o = curvflow(&["vpmcf", "run", "--init", "mode:2,0:0.1", "--h", "0.05", "--T", "0.3", "--L", "8", "--out", path_str(&trace)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,P,volume,Hbar,osc,lambda,D,el_residual,delta_cmc");
    assert_eq!(text.lines().count(), 1 + 7);
    assert!(dir.path().join("trace.ledger.csv").exists());
    let summary = read_json(&dir.path().join("trace.summary.json"));
    assert_eq!(summary["ledger"]["comparison_holds"], true);

    let fit = dir.path().join("fit.json");
    let o = curvflow(&["fit", "--input", path_str(&trace), "--window", "all", "--out", path_str(&fit)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&fit);
    assert!(v["rate"].as_f64().unwrap() < 0.0);
    assert_eq!(v["points"], 7);

    let o = curvflow(&["fit", "--input", path_str(&trace), "--observable", "nope", "--out", path_str(&fit)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ms_run_writes_trace_ledger_and_holder() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("ms.csv");
    let o = curvflow(&["ms", "run", "--R", "4", "--n", "32", "--h", "0.05", "--T", "0.2", "--L", "8", "--out", path_str(&trace)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let header = std::fs::read_to_string(&trace).unwrap().lines().next().unwrap().to_owned();
    assert_eq!(header, "t,P,volume,Hbar,osc,lambda,D,el_residual,delta_cmc,hminus1,poisson_residual");
    let holder = std::fs::read_to_string(dir.path().join("ms.holder.csv")).unwrap();
    assert!(holder.starts_with("constant,pairs,worst"));
    let summary = read_json(&dir.path().join("ms.summary.json"));
    assert_eq!(summary["steps"], 4);
    assert_eq!(summary["ledger"]["perimeter_monotone"], true);
    let m = read_json(&dir.path().join("ms.csv.manifest.json"));
    assert_eq!(m["outputs"].as_array().unwrap().len(), 4);
}

#[test]
fn off_round_trip_and_quad_error() {
    let dir = tempfile::tempdir().unwrap();
    let off = dir.path().join("ico.off");
    assert!(curvflow(&["mesh", "generate", "--kind", "icosphere", "--subdiv", "2", "--out", path_str(&off)]).status.success());
    let report = dir.path().join("ico.json");
    let o = curvflow(&["mesh", "report", "--input", path_str(&off), "--out", path_str(&report)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&report);
    assert_eq!(v["vertices"], 162);
    assert_eq!(v["genus"], 0);

    let quad = dir.path().join("quad.off");
    std::fs::write(&quad, "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n").unwrap();
    let o = curvflow(&["mesh", "report", "--input", path_str(&quad), "--out", path_str(&report)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("non-triangle face at line 7"));
}

#[test]
fn torus_mesh_has_genus_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("torus.json");
    assert!(curvflow(&["mesh", "report", "--kind", "torus", "--out", path_str(&out)]).status.success());
    let v = read_json(&out);
    assert_eq!(v["genus"], 1);
    assert!(v["angle_deficit_sum"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn sharpness_takes_a_comma_separated_list() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sharp.csv");
    let o = curvflow(&["alexandrov", "sharpness", "--mode", "2,0", "--eps", "0.1,0.05", "--p", "1.25", "--L", "12", "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "amplitude,lhs,rhs,ratio,ratio_p");
    assert_eq!(text.lines().count(), 3);
    let m = read_json(&dir.path().join("sharp.csv.manifest.json"));
    assert_eq!(m["config"]["amplitudes"], serde_json::json!([0.1, 0.05]));
}
