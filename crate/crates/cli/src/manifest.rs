use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct InputHash {
    pub path: PathBuf,
    pub sha256: Option<String>,
}

/// Record of one invocation, enough to rerun it and compare the output.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub inputs: Vec<InputHash>,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub outcome: u8,
    pub output_sha256: String,
    pub elapsed_ms: u128,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(
        command: Vec<String>,
        inputs: &[PathBuf],
        seed: Option<u64>,
        outcome: u8,
        output: &str,
        elapsed: Duration,
    ) -> Self {
        RunManifest {
            command,
            inputs: inputs
                .iter()
                .map(|p| InputHash {
                    path: p.clone(),
                    sha256: std::fs::read(p).ok().map(|b| sha256_hex(&b)),
                })
                .collect(),
            seed,
            version: env!("CARGO_PKG_VERSION"),
            outcome,
            output_sha256: sha256_hex(output.as_bytes()),
            elapsed_ms: elapsed.as_millis(),
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let json = serde_json::to_string_pretty(self).expect("serialisable");
        std::fs::write(path, json + "\n")
    }
}
