//! Command-line grammar. Every flag left unset falls back to the config file,
//! then to the built-in default.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::parse_mode;

#[derive(Debug, Parser)]
#[command(name = "curvflow", version, about = "Curvature-flow experiments on nearly spherical surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Geometry of a radial surface.
    #[command(subcommand)]
    Geom(GeomCommand),
    /// Triangle meshes.
    #[command(subcommand)]
    Mesh(MeshCommand),
    /// Alexandrov inequality measurements.
    #[command(subcommand)]
    Alexandrov(AlexandrovCommand),
    /// Volume-preserving mean curvature flow.
    #[command(subcommand)]
    Vpmcf(VpmcfCommand),
    /// Mullins–Sekerka flow on the flat torus.
    #[command(subcommand)]
    Ms(MsCommand),
    /// Log-linear rate fit of a trace column.
    Fit(FitArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; the manifest is written next to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum GeomCommand {
    /// Geometric report as JSON.
    Report(GeomArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GeomArgs {
    #[command(flatten)]
    pub common: Common,
    /// `sphere`, `mode:l,m:amp` or `random:seed:lmin:lmax:amp`.
    #[arg(long)]
    pub init: Option<String>,
    /// Single mode `l,m`; combined with `--amp`.
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<(usize, i64)>,
    #[arg(long)]
    pub amp: Option<f64>,
    #[arg(long = "L")]
    pub band_limit: Option<usize>,
    #[arg(long)]
    pub normalize: Option<bool>,
}

#[derive(Debug, Subcommand)]
pub enum MeshCommand {
    /// Report of a generated or loaded mesh as JSON.
    Report(MeshArgs),
    /// Write a generated mesh as OFF.
    Generate(MeshArgs),
}

#[derive(Debug, Clone, Args)]
pub struct MeshArgs {
    #[command(flatten)]
    pub common: Common,
    /// `icosphere`, `torus` or `file`.
    #[arg(long)]
    pub kind: Option<String>,
    /// OFF file, implies `--kind file`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub subdiv: Option<usize>,
    #[arg(long)]
    pub major: Option<f64>,
    #[arg(long)]
    pub minor: Option<f64>,
    #[arg(long)]
    pub n_major: Option<usize>,
    #[arg(long)]
    pub n_minor: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum AlexandrovCommand {
    /// Random perturbations, one CSV row per sample plus a summary row.
    Sweep(SweepArgs),
    /// Single-mode amplitude sequence.
    Sharpness(SharpnessArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub lmin: Option<usize>,
    #[arg(long)]
    pub lmax: Option<usize>,
    #[arg(long)]
    pub amp: Option<f64>,
    #[arg(long)]
    pub delta0: Option<f64>,
    #[arg(long = "L")]
    pub band_limit: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SharpnessArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<(usize, i64)>,
    /// Decreasing amplitudes, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub eps: Option<Vec<f64>>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long = "L")]
    pub band_limit: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum VpmcfCommand {
    /// Trace CSV plus ledger CSV and summary JSON.
    Run(VpmcfArgs),
}

#[derive(Debug, Clone, Args)]
pub struct VpmcfArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long)]
    pub normalize: Option<bool>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long = "T")]
    pub t_final: Option<f64>,
    /// `mm` or `direct`.
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long = "L")]
    pub band_limit: Option<usize>,
    #[arg(long)]
    pub gradient_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum MsCommand {
    /// Trace CSV plus ledger, Hölder and summary outputs.
    Run(MsArgs),
}

#[derive(Debug, Clone, Args)]
pub struct MsArgs {
    #[command(flatten)]
    pub common: Common,
    /// `sphere`, `mode:l,m:amp`, `random:...` or `balls:count:gap`.
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long)]
    pub radius: Option<f64>,
    /// Torus side length.
    #[arg(long = "R")]
    pub side: Option<f64>,
    /// Voxels per axis.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long = "T")]
    pub t_final: Option<f64>,
    #[arg(long = "L")]
    pub band_limit: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: Common,
    /// Trace CSV.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// `perimeter_deficit` or a column name.
    #[arg(long)]
    pub observable: Option<String>,
    #[arg(long)]
    pub balls: Option<usize>,
    /// `trailing_half` or `all`.
    #[arg(long)]
    pub window: Option<String>,
}
