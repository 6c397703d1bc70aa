//! JSON sidecar describing how an output file was produced.
//!
//! The manifest holds only inputs (tool version, corpus checksum, resolved
//! grid or configuration, seed), so equal manifests mean equal outputs. Wall
//! clock data lives in the separate timing file.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use predcode_core::corpus::{dataset_stats, Corpus};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusInfo {
    /// File name without directories.
    pub file: String,
    pub sha256: String,
    pub documents: usize,
    pub training_relevant: usize,
    pub training_not_relevant: usize,
    pub validation_relevant: usize,
    pub validation_not_relevant: usize,
}

impl CorpusInfo {
    pub fn new(path: &Path, corpus: &Corpus) -> Result<Self> {
        let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        let d = dataset_stats(corpus);
        Ok(CorpusInfo {
            file: path
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default(),
            sha256: hex::encode(Sha256::digest(&bytes)),
            documents: corpus.len(),
            training_relevant: d.training_relevant,
            training_not_relevant: d.training_not_relevant,
            validation_relevant: d.validation_relevant,
            validation_not_relevant: d.validation_not_relevant,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub corpus: CorpusInfo,
    /// Grid file text in canonical form, or the single configuration.
    pub parameters: String,
    pub recall_targets: Vec<f64>,
    pub seed: u64,
    pub configurations: usize,
}

impl RunManifest {
    pub fn new(command: &str, corpus: CorpusInfo, parameters: String, recall_targets: &[f64], seed: u64, configurations: usize) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            command: command.to_owned(),
            corpus,
            parameters,
            recall_targets: recall_targets.to_vec(),
            seed,
            configurations,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("malformed manifest {}", path.display()))
    }
}

/// `results.csv` → `results.csv.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    sidecar(output, "manifest.json")
}

/// `results.csv` → `results.csv.timing.csv`.
pub fn timing_path(output: &Path) -> PathBuf {
    sidecar(output, "timing.csv")
}

fn sidecar(output: &Path, suffix: &str) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".");
    name.push(suffix);
    output.with_file_name(name)
}
