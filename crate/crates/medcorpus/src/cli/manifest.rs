//! Run manifests: a machine-readable record written beside every output.
//!
//! Manifests must be reproducible: two runs over identical inputs and
//! data-affecting flags produce identical manifests except for wall time.
//! Execution-only parameters (`--workers`, `--log-level`, `--manifest`)
//! therefore never enter the manifest, neither in the command echo nor in
//! the config snapshot.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestCounts {
    pub read: u64,
    pub kept: u64,
    pub dropped: u64,
    pub segments: u64,
    pub translated: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Canonical command reconstruction (data-affecting flags only).
    pub command: String,
    pub subcommand: String,
    /// Snapshot of the data-affecting configuration.
    pub config: serde_json::Value,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub counts: ManifestCounts,
    pub wall_time_secs: f64,
    pub version: String,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: serde_json::Value) -> Self {
        let command = canonical_command(subcommand, &config);
        Self {
            command,
            subcommand: subcommand.to_string(),
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
            counts: ManifestCounts::default(),
            wall_time_secs: 0.0,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// read = kept + dropped must hold before the manifest is written.
    pub fn check_counts(&self) -> Result<()> {
        if self.counts.read != self.counts.kept + self.counts.dropped {
            return Err(Error::Config(format!(
                "inconsistent manifest counts: read={} kept={} dropped={}",
                self.counts.read, self.counts.kept, self.counts.dropped
            )));
        }
        Ok(())
    }

    /// Write to `explicit` when given, else beside the primary output as
    /// `<output>.manifest.json`. Commands without a file output skip the
    /// manifest unless a path was requested.
    pub fn write(&self, explicit: Option<&Path>) -> Result<Option<PathBuf>> {
        self.check_counts()?;
        let target: Option<PathBuf> = match explicit {
            Some(p) => Some(p.to_path_buf()),
            None => self
                .outputs
                .first()
                .map(|o| PathBuf::from(format!("{o}.manifest.json"))),
        };
        let Some(path) = target else {
            return Ok(None);
        };
        let json = serde_json::to_string_pretty(self).map_err(|e| Error::parse(&path, e))?;
        std::fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
        Ok(Some(path))
    }
}

fn canonical_command(subcommand: &str, config: &serde_json::Value) -> String {
    let mut command = format!("medcorpus {subcommand}");
    if let serde_json::Value::Object(map) = config {
        for (key, value) in map {
            let rendered = match value {
                serde_json::Value::Null => continue,
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            command.push_str(&format!(" --{key} {rendered}"));
        }
    }
    command
}
