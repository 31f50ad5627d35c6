//! Provenance attached to every experiment output.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::grid::GridSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub inputs: Vec<InputHash>,
    pub params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            tool: "pgt".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            inputs: Vec::new(),
            params: BTreeMap::new(),
            grid: None,
            seed: None,
            threads: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn grid(mut self, grid: GridSpec) -> Self {
        self.grid = Some(grid);
        self
    }

    pub fn threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads;
        self
    }

    /// Records the SHA-256 of `bytes` under `path`.
    pub fn input_bytes(mut self, path: &str, bytes: &[u8]) -> Self {
        self.inputs.push(InputHash { path: path.into(), sha256: sha256_hex(bytes) });
        self
    }

    pub fn input_file(self, path: &Path) -> anyhow::Result<Self> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(self.input_bytes(&path.display().to_string(), &bytes))
    }

    /// One-line `# manifest=...` header for CSV outputs.
    pub fn csv_comment(&self) -> String {
        format!("# manifest={}", serde_json::to_string(self).expect("manifest serializes"))
    }

    /// Parses the manifest back out of a CSV produced with [`Self::csv_comment`].
    pub fn from_csv(text: &str) -> Option<Self> {
        text.lines()
            .find_map(|l| l.strip_prefix("# manifest="))
            .and_then(|json| serde_json::from_str(json).ok())
    }
}
