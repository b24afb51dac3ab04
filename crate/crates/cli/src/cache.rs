//! Memoized spectra under `REVLAB_CACHE_DIR`.

use std::fs;
use std::path::PathBuf;

use revlab_core::sl::SpectrumResult;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "REVLAB_CACHE_DIR";

/// Identity of a spectrum computation. `source` holds the bytes of a custom
/// curve file so that editing the file invalidates the entry.
#[derive(Debug, Serialize)]
pub struct SpectrumKey<'a> {
    pub version: &'a str,
    pub descriptor: &'a str,
    pub source: Option<String>,
    pub n: usize,
    pub l: usize,
    pub k: usize,
    pub tol: f64,
}

impl SpectrumKey<'_> {
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("key serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

fn dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// Returns the cached result or computes and stores it. Unreadable or
/// corrupt entries are recomputed.
pub fn cached<E>(key: &SpectrumKey, compute: impl FnOnce() -> Result<SpectrumResult, E>) -> Result<SpectrumResult, E> {
    let Some(dir) = dir() else {
        return compute();
    };
    let path = dir.join(format!("{}.json", key.digest()));
    if let Some(hit) = fs::read_to_string(&path)
        .ok()
        .and_then(|t| serde_json::from_str::<SpectrumResult>(&t).ok())
    {
        return Ok(hit);
    }
    let result = compute()?;
    if fs::create_dir_all(&dir).is_ok() {
        let tmp = path.with_extension("json.tmp");
        if fs::write(&tmp, serde_json::to_string(&result).expect("result serializes")).is_ok() {
            let _ = fs::rename(&tmp, &path);
        }
    }
    Ok(result)
}
