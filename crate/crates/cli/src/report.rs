use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context as _, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Inputs read, outputs written and the verdict of one invocation.
#[derive(Default)]
pub struct Context {
    inputs: Vec<(String, String)>,
    outputs: Vec<String>,
    verdict: Value,
}

#[derive(Serialize)]
struct InputDigest<'a> {
    path: &'a str,
    sha256: &'a str,
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: Vec<String>,
    exit_code: u8,
    inputs: Vec<InputDigest<'a>>,
    outputs: &'a [String],
    verdict: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<f64>,
}

impl Context {
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push((path.display().to_string(), hex(&Sha256::digest(&bytes))));
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    /// Writes `text` to `path`, or to standard output.
    pub fn emit(&mut self, text: &str, path: Option<&PathBuf>) -> Result<()> {
        match path {
            Some(p) => {
                std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
                self.outputs.push(p.display().to_string());
            }
            None => print!("{text}"),
        }
        Ok(())
    }

    pub fn set_verdict(&mut self, verdict: Value) {
        self.verdict = verdict;
    }

    pub fn write(&self, path: &Path, exit_code: u8, elapsed: Option<Duration>) -> Result<()> {
        let report = RunReport {
            command: std::env::args().skip(1).collect(),
            exit_code,
            inputs: self.inputs.iter().map(|(path, sha256)| InputDigest { path, sha256 }).collect(),
            outputs: &self.outputs,
            verdict: &self.verdict,
            elapsed_ms: elapsed.map(|d| d.as_secs_f64() * 1e3),
        };
        std::fs::write(path, fdes_core::io::to_canonical(&report))
            .with_context(|| format!("writing {}", path.display()))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
