//! Run manifests written next to every set of outputs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cli::Command;
use crate::error::{CliError, Result};

pub const FILE_NAME: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// Command line as typed, minus the program path and `--out-dir`.
    pub argv: Vec<String>,
    pub seed: Option<u64>,
    pub config: Command,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(argv: Vec<String>, config: Command, outputs: Vec<String>) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            argv,
            seed: config.seed(),
            config,
            outputs,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::input(path, e))
    }
}

/// Drops the program path and any `--out-dir` argument.
pub fn echo_argv(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        if skip {
            skip = false;
        } else if a == "--out-dir" {
            skip = true;
        } else if !a.starts_with("--out-dir=") {
            out.push(a.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_drops_out_dir() {
        let args: Vec<String> = ["/bin/cq", "--out-dir", "x", "verify", "--out-dir=y", "--only", "circle"]
            .map(String::from)
            .to_vec();
        assert_eq!(echo_argv(&args), ["verify", "--only", "circle"]);
    }
}
