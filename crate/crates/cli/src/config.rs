//! Run configuration: an optional flat TOML file overlaid by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to per-command defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Flat TOML file with the same keys as the long flags.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Hypersurface dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Highest eigenvalue index.
    #[arg(long)]
    pub k: Option<usize>,
    /// Relative solver tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Family descriptor, repeatable (`round_sphere`, `torus:R=3`, `wavy:seed=7`, ...).
    #[arg(long = "family")]
    pub family: Vec<String>,
    /// Comma-separated parameter grid (h, δ, R, ε or the family parameter).
    #[arg(long, alias = "R", value_delimiter = ',', allow_hyphen_values = true)]
    pub grid: Option<Vec<f64>>,
    /// Comma-separated harmonic degrees for `modes`.
    #[arg(long, value_delimiter = ',')]
    pub l: Option<Vec<usize>>,
    /// Ambient space for `extremal-seq`: euclidean or hyperbolic.
    #[arg(long)]
    pub ambient: Option<String>,
    /// Outside conformal factor for `concentrate`.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Transition width for `concentrate`, relative to the concentration interval.
    #[arg(long)]
    pub smoothing: Option<f64>,
    /// Constant conformal factor (control run) for `concentrate`.
    #[arg(long)]
    pub flat: bool,
    /// Ellipse centre as a multiple of ε.
    #[arg(long)]
    pub center_ratio: Option<f64>,
    /// Base finite-difference step for `probe`.
    #[arg(long)]
    pub step: Option<f64>,
    /// Escalation threshold N for `mindex`.
    #[arg(long)]
    pub threshold: Option<usize>,
    /// Report file; stdout when absent. A manifest is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for independent rows.
    #[arg(long)]
    pub workers: Option<usize>,
}

/// Fully merged configuration. Serialized into the manifest and hashed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub tol: Option<f64>,
    pub family: Vec<String>,
    pub grid: Option<Vec<f64>>,
    pub l: Option<Vec<usize>>,
    pub ambient: Option<String>,
    pub eps: Option<f64>,
    pub smoothing: Option<f64>,
    pub flat: Option<bool>,
    pub center_ratio: Option<f64>,
    pub step: Option<f64>,
    pub threshold: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
}

pub const COMMANDS: [&str; 9] = [
    "spectrum",
    "modes",
    "bound",
    "extremal-seq",
    "concentrate",
    "torus",
    "ellipse",
    "probe",
    "mindex",
];

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Loads `opts.config` if given and lets every set flag override it.
    pub fn resolve(command: Option<&str>, opts: &Opts) -> Result<Self, CliError> {
        let mut c = match &opts.config {
            Some(p) => Self::from_file(p)?,
            None => RunConfig::default(),
        };
        if let Some(cmd) = command {
            c.command = Some(cmd.to_string());
        }
        macro_rules! overlay {
            ($($f:ident),*) => { $( if opts.$f.is_some() { c.$f = opts.$f.clone(); } )* };
        }
        overlay!(n, k, tol, grid, l, ambient, eps, smoothing, center_ratio, step, threshold, out, format, workers);
        if !opts.family.is_empty() {
            c.family = opts.family.clone();
        }
        if opts.flat {
            c.flat = Some(true);
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match self.command.as_deref() {
            None => return Err(CliError::Config("no command given".into())),
            Some(c) if !COMMANDS.contains(&c) => {
                return Err(CliError::Config(format!(
                    "unknown command `{c}`; expected one of {}",
                    COMMANDS.join(", ")
                )))
            }
            _ => {}
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(CliError::Config(format!("tol = {t} must be positive")));
            }
        }
        if let Some(g) = &self.grid {
            if g.is_empty() {
                return Err(CliError::Config("grid is empty".into()));
            }
            let up = g.windows(2).all(|w| w[1] > w[0]);
            let down = g.windows(2).all(|w| w[1] < w[0]);
            if !(up || down) {
                return Err(CliError::Config("grid must be strictly monotone".into()));
            }
        }
        if self.workers == Some(0) {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn command(&self) -> &str {
        self.command.as_deref().unwrap_or_default()
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    /// SHA-256 of the canonical JSON form, ignoring `out` and `workers`,
    /// which do not change the numbers.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        c.workers = None;
        let json = serde_json::to_string(&c).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}
