//! Subcommand implementations. Each returns its effective configuration and
//! the files it wrote; `run` adds the manifest.

mod alexandrov;
mod fit;
mod geom;
mod mesh;
mod ms;
mod vpmcf;

use std::path::PathBuf;

use crate::args::{AlexandrovCommand, Command, GeomCommand, MeshCommand, MsCommand, VpmcfCommand};
use crate::Result;

pub use ms::{holder_table, ms_ledger_table, ms_trace_table, union_curvature, UnionCurvature};
pub use vpmcf::{ledger_table, trace_table};

pub struct Outcome {
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    /// The `--out` file; the manifest is named after it.
    pub primary: PathBuf,
    pub outputs: Vec<PathBuf>,
}

pub fn dispatch(command: &Command) -> Result<Outcome> {
    match command {
        Command::Geom(GeomCommand::Report(a)) => geom::report(a),
        Command::Mesh(MeshCommand::Report(a)) => mesh::report(a),
        Command::Mesh(MeshCommand::Generate(a)) => mesh::generate(a),
        Command::Alexandrov(AlexandrovCommand::Sweep(a)) => alexandrov::sweep(a),
        Command::Alexandrov(AlexandrovCommand::Sharpness(a)) => alexandrov::sharpness(a),
        Command::Vpmcf(VpmcfCommand::Run(a)) => vpmcf::run(a),
        Command::Ms(MsCommand::Run(a)) => ms::run(a),
        Command::Fit(a) => fit::run(a),
    }
}

/// Replaces `slot` when the flag was given.
fn set<T>(slot: &mut T, flag: Option<T>) {
    if let Some(v) = flag {
        *slot = v;
    }
}
