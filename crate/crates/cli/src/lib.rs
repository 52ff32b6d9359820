//! Command-line driver for the curvflow experiments: argument and config
//! handling, the subcommands, OFF meshes, CSV/JSON export and run manifests.

pub mod args;
pub mod commands;
pub mod config;
pub mod export;
pub mod manifest;
pub mod off;

use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use thiserror::Error;

pub use manifest::RunManifest;
pub use off::{load_mesh, parse_off, save_mesh, OffError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Off {
        path: PathBuf,
        #[source]
        source: OffError,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] curvflow::Error),
}

impl CliError {
    /// 2 for numerical failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Caps the global thread pool at `CURVFLOW_THREADS` when it is set.
pub fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("CURVFLOW_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("CURVFLOW_THREADS must be a positive integer, got '{value}'")))?;
    // a pool built earlier in the process keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `argv`, runs the command, writes its manifest and returns the
/// process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match args::Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    let start = Instant::now();
    match commands::dispatch(&cli.command) {
        Ok(outcome) => {
            let manifest = RunManifest::new(&argv, outcome.config, outcome.seed, start.elapsed(), &outcome.outputs);
            let path = manifest::manifest_path(&outcome.primary);
            match export::write_json(&path, &manifest) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
