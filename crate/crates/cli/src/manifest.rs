//! Output files and the run manifest that lists them with content hashes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub version: String,
    pub started_at: String,
    pub finished_at: String,
    pub elapsed_seconds: f64,
    pub files: Vec<FileEntry>,
}

/// Collects output files under one directory, hashing each as it is written.
pub struct OutputDir {
    dir: PathBuf,
    files: Vec<FileEntry>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
        self.files.push(FileEntry {
            name: name.to_string(),
            bytes: contents.len(),
            sha256: hex::encode(Sha256::digest(contents.as_bytes())),
        });
        Ok(())
    }

    /// Writes `manifest.json` last and returns it.
    pub fn finish(
        self,
        command: &str,
        config: Option<&Path>,
        seed: Option<u64>,
        started: chrono::DateTime<chrono::Utc>,
    ) -> Result<RunManifest, CliError> {
        let finished = chrono::Utc::now();
        let manifest = RunManifest {
            command: command.to_string(),
            config: config.map(Path::to_path_buf),
            out_dir: self.dir.clone(),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_at: started.to_rfc3339(),
            finished_at: finished.to_rfc3339(),
            elapsed_seconds: (finished - started).num_milliseconds() as f64 / 1000.0,
            files: self.files,
        };
        let path = self.dir.join("manifest.json");
        let json = serde_json::to_string_pretty(&manifest).expect("manifest is serialisable") + "\n";
        fs::write(&path, json).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
        Ok(manifest)
    }
}
