use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    /// Effective configuration after defaults, config file and flags.
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(
        argv: &[String],
        config: serde_json::Value,
        seed: Option<u64>,
        elapsed: Duration,
        outputs: &[PathBuf],
    ) -> Self {
        Self {
            command_line: argv.to_vec(),
            config,
            seed,
            version: format!("curvflow {}", env!("CARGO_PKG_VERSION")),
            wall_clock_seconds: elapsed.as_secs_f64(),
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        }
    }
}

/// `<out>.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}
