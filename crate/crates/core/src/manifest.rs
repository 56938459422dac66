//! Run manifests: what a command was asked to do and what it wrote.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Version stamped into every manifest.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// The parsed subcommand, enough to run it again.
    pub params: serde_json::Value,
    pub tool_version: String,
    /// SHA-256 of each input file, keyed by the path given on the command line.
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<OutputFile>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn hash_file(path: &Path) -> Result<String> {
    Ok(sha256_hex(&fs::read(path)?))
}

/// `out.json` gets `out.json.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

impl RunManifest {
    pub fn new(command: &str, params: serde_json::Value) -> Self {
        RunManifest {
            command: command.to_string(),
            params,
            tool_version: TOOL_VERSION.to_string(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<()> {
        self.inputs.insert(path.display().to_string(), hash_file(path)?);
        Ok(())
    }

    pub fn add_output(&mut self, path: &Path) -> Result<()> {
        let sha256 = hash_file(path)?;
        self.outputs.push(OutputFile { path: path.to_path_buf(), sha256 });
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
    }

    /// Fail unless every recorded input still hashes the same.
    pub fn check_inputs(&self) -> Result<()> {
        for (path, want) in &self.inputs {
            let got = hash_file(Path::new(path))?;
            if &got != want {
                return Err(Error::Inconsistent(format!("input {path} changed since the run")));
            }
        }
        Ok(())
    }
}
