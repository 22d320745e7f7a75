//! Run directories: CSV files with `#` metadata headers and a manifest.
//!
//! Every CSV starts with comment lines naming the tool version, the command,
//! the configuration hash and the seed, followed by a header row. Nothing
//! time-dependent goes into a CSV, so identical runs produce identical bytes.
//! Wall-clock timings live only in the manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// SHA-256 over the command name and the JSON form of its effective settings.
pub fn config_hash<T: Serialize>(command: &str, settings: &T) -> String {
    let json = serde_json::to_string(settings).expect("settings serialize");
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update(b"\n");
    h.update(json.as_bytes());
    hex::encode(h.finalize())
}

pub fn file_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub command: String,
    pub config_hash: String,
    pub seeds: Vec<u64>,
    /// Paths relative to the run directory.
    pub files: Vec<String>,
    pub timings_ms: BTreeMap<String, u128>,
    /// Command-specific results, e.g. the game outcome.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub summary: BTreeMap<String, String>,
}

pub fn manifest_name(command: &str) -> String {
    format!("manifest-{command}.json")
}

pub struct RunDir {
    root: PathBuf,
    force: bool,
    command: String,
    config_hash: String,
    seeds: Vec<u64>,
    files: Vec<String>,
    started: Instant,
    timings: BTreeMap<String, u128>,
    summary: BTreeMap<String, String>,
}

impl RunDir {
    pub fn create(
        root: &Path,
        force: bool,
        command: &str,
        config_hash: String,
        seeds: Vec<u64>,
    ) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        let dir = RunDir {
            root: root.to_path_buf(),
            force,
            command: command.to_owned(),
            config_hash,
            seeds,
            files: Vec::new(),
            started: Instant::now(),
            timings: BTreeMap::new(),
            summary: BTreeMap::new(),
        };
        dir.check_free(&manifest_name(command))?;
        Ok(dir)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn check_free(&self, name: &str) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        if path.exists() && !self.force {
            return Err(CliError::Io(format!(
                "{} already exists; pass --force to overwrite",
                path.display()
            )));
        }
        Ok(path)
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.check_free(name)?;
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        self.files.push(name.to_owned());
        Ok(path)
    }

    /// Writes `rows` under `header`, preceded by the metadata comment block.
    pub fn write_csv<I, R>(
        &mut self,
        name: &str,
        seed: Option<u64>,
        header: &[&str],
        rows: I,
    ) -> Result<PathBuf, CliError>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
    {
        let mut buf = self.comment_block(seed).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            let fail = |e: csv::Error| CliError::Io(format!("{name}: {e}"));
            w.write_record(header).map_err(fail)?;
            for row in rows {
                w.write_record(row).map_err(fail)?;
            }
            w.flush().map_err(|e| CliError::Io(format!("{name}: {e}")))?;
        }
        self.write(name, &buf)
    }

    pub fn comment_block(&self, seed: Option<u64>) -> String {
        let mut s = format!(
            "# graphwar {TOOL_VERSION}\n# command: {}\n# config_hash: {}\n",
            self.command, self.config_hash
        );
        if let Some(seed) = seed {
            s.push_str(&format!("# seed: {seed}\n"));
        }
        s
    }

    pub fn time(&mut self, label: &str, since: Instant) {
        self.timings.insert(label.to_owned(), since.elapsed().as_millis());
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.summary.insert(key.to_owned(), value.to_string());
    }

    pub fn finish(mut self) -> Result<Manifest, CliError> {
        self.timings.insert("total".into(), self.started.elapsed().as_millis());
        let manifest = Manifest {
            tool_version: TOOL_VERSION.into(),
            command: self.command.clone(),
            config_hash: self.config_hash.clone(),
            seeds: self.seeds.clone(),
            files: self.files.clone(),
            timings_ms: self.timings.clone(),
            summary: self.summary.clone(),
        };
        let name = manifest_name(&self.command);
        let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        json.push('\n');
        let path = self.root.join(&name);
        fs::write(&path, json).map_err(|e| CliError::io(&path, e))?;
        Ok(manifest)
    }
}

/// Formats a float with the shortest representation that reads back exactly.
pub fn num(x: f64) -> String {
    format!("{x}")
}
