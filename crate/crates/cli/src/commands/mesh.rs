use serde::Serialize;

use curvflow::surface::{mesh_curvatures, mesh_report, GeometricReport, TriMesh};

use super::{set, Outcome};
use crate::args::MeshArgs;
use crate::config::{self, MeshConfig};
use crate::export::write_json;
use crate::off::{load_mesh, save_mesh};
use crate::{CliError, Result};

#[derive(Debug, Serialize)]
struct MeshOutput {
    vertices: usize,
    faces: usize,
    edges: usize,
    euler_characteristic: i64,
    genus: i64,
    angle_deficit_sum: f64,
    report: GeometricReport,
}

fn configure(a: &MeshArgs) -> Result<MeshConfig> {
    let mut cfg: MeshConfig = config::load(a.common.config.as_deref())?;
    set(&mut cfg.kind, a.kind.clone());
    if a.input.is_some() {
        cfg.input = a.input.clone();
        cfg.kind = "file".into();
    }
    set(&mut cfg.subdivisions, a.subdiv);
    set(&mut cfg.major, a.major);
    set(&mut cfg.minor, a.minor);
    set(&mut cfg.n_major, a.n_major);
    set(&mut cfg.n_minor, a.n_minor);
    Ok(cfg)
}

fn build(cfg: &MeshConfig) -> Result<TriMesh> {
    match cfg.kind.as_str() {
        "icosphere" => {
            if cfg.subdivisions > 7 {
                return Err(CliError::Config("icosphere subdivisions above 7 are not supported".into()));
            }
            Ok(TriMesh::icosphere(cfg.subdivisions))
        }
        "torus" => Ok(TriMesh::torus(cfg.major, cfg.minor, cfg.n_major, cfg.n_minor)?),
        "file" => {
            let path = cfg.input.as_deref().ok_or_else(|| CliError::Config("mesh kind 'file' needs --input".into()))?;
            load_mesh(path)
        }
        other => Err(CliError::Config(format!("unknown mesh kind '{other}'"))),
    }
}

pub fn report(a: &MeshArgs) -> Result<Outcome> {
    let cfg = configure(a)?;
    let mesh = build(&cfg)?;
    let k = mesh_curvatures(&mesh);
    let out = MeshOutput {
        vertices: mesh.vertices().len(),
        faces: mesh.faces().len(),
        edges: mesh.edge_count(),
        euler_characteristic: mesh.euler_characteristic(),
        genus: mesh.genus(),
        angle_deficit_sum: k.angle_deficit.iter().sum(),
        report: mesh_report(&mesh),
    };
    write_json(&a.common.out, &out)?;
    Ok(Outcome {
        config: config::snapshot(&cfg),
        seed: None,
        primary: a.common.out.clone(),
        outputs: vec![a.common.out.clone()],
    })
}

pub fn generate(a: &MeshArgs) -> Result<Outcome> {
    let cfg = configure(a)?;
    let mesh = build(&cfg)?;
    save_mesh(&mesh, &a.common.out)?;
    Ok(Outcome {
        config: config::snapshot(&cfg),
        seed: None,
        primary: a.common.out.clone(),
        outputs: vec![a.common.out.clone()],
    })
}
