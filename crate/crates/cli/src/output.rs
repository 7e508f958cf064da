//! CSV plus JSON report emission.
//!
//! `--out results.csv` writes the per-record CSV there and the full
//! [`ExperimentReport`] to `results.json`. Everything except
//! `wall_clock_seconds` is a pure function of the config.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Serialize)]
pub struct ExperimentReport<'a, R: Serialize> {
    pub command: &'a str,
    pub toolkit_version: &'a str,
    pub master_seed: u64,
    pub config: &'a Value,
    pub records: &'a [R],
    pub summary: Value,
    pub wall_clock_seconds: f64,
}

pub fn json_sibling(csv_path: &Path) -> CliResult<PathBuf> {
    let json = csv_path.with_extension("json");
    if json == csv_path {
        return Err(CliError::Usage(format!(
            "--out {} would collide with its JSON report",
            csv_path.display()
        )));
    }
    Ok(json)
}

pub struct Emitter<'a> {
    pub command: &'a str,
    pub master_seed: u64,
    pub config: &'a Value,
    pub started: Instant,
}

impl Emitter<'_> {
    pub fn emit<R: Serialize>(&self, out: &Path, records: &[R], summary: Value) -> CliResult<PathBuf> {
        let json_path = json_sibling(out)?;
        let mut w = csv::Writer::from_path(out)?;
        for r in records {
            w.serialize(r)?;
        }
        w.flush()?;
        let report = ExperimentReport {
            command: self.command,
            toolkit_version: env!("CARGO_PKG_VERSION"),
            master_seed: self.master_seed,
            config: self.config,
            records,
            summary,
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
        };
        let mut bytes = serde_json::to_vec_pretty(&report).map_err(|e| CliError::Parse(e.to_string()))?;
        bytes.push(b'\n');
        std::fs::write(&json_path, bytes)?;
        Ok(json_path)
    }
}
