use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;

/// Reproducibility record written next to every output file.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// Preset name or config path.
    pub source: String,
    /// The exact argument list.
    pub arguments: Vec<String>,
    pub policy: serde_json::Value,
    pub seed: u64,
    pub sequential: bool,
    pub outputs: Vec<String>,
    pub tool_version: String,
    pub wall_time_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str, source: &str, policy: serde_json::Value, seed: u64, sequential: bool) -> Self {
        Self {
            command: command.into(),
            source: source.into(),
            arguments: std::env::args().collect(),
            policy,
            seed,
            sequential,
            outputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            wall_time_seconds: 0.0,
        }
    }

    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        output.with_file_name(name)
    }

    /// Writes `output` and its manifest.
    pub fn write(mut self, output: &Path, contents: &str, elapsed: Duration) -> std::io::Result<()> {
        std::fs::write(output, contents)?;
        self.outputs.push(output.display().to_string());
        self.wall_time_seconds = elapsed.as_secs_f64();
        let json = serde_json::to_string_pretty(&self).map_err(std::io::Error::other)?;
        std::fs::write(Self::path_for(output), json + "\n")
    }
}
