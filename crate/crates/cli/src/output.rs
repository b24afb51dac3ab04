//! Report files and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::commands::{Outcome, RowStatus};
use crate::config::{Format, RunConfig};
use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub config_hash: String,
    pub config: &'a RunConfig,
    pub timestamp: String,
    pub output: Option<&'a Path>,
    pub all_converged: bool,
    pub rows: &'a [RowStatus],
}

/// `report.csv` -> `report.csv.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Writes the report to `--out` (plus manifest) or to stdout.
pub fn emit(config: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    let body = match config.format() {
        Format::Csv => &outcome.csv,
        Format::Json => &outcome.json,
    };
    match &config.out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            if !body.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(path, body)?;
            let manifest = Manifest {
                tool: "revlab",
                version: env!("CARGO_PKG_VERSION"),
                command: config.command(),
                config_hash: config.hash(),
                config,
                timestamp: chrono::Utc::now().to_rfc3339(),
                output: Some(path),
                all_converged: outcome.rows.iter().all(|r| r.converged),
                rows: &outcome.rows,
            };
            let json = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Numeric(e.to_string()))?;
            fs::write(manifest_path(path), json + "\n")?;
        }
    }
    Ok(())
}
