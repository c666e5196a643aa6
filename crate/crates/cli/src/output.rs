//! Deterministic CSV and JSON writers.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, Result};

/// Units of every physical column; echoed in run metadata.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Units {
    pub temperature: &'static str,
    pub energy: &'static str,
    pub wave_number: &'static str,
    pub length: &'static str,
    pub density: &'static str,
    pub mass: &'static str,
    pub potential: &'static str,
    pub normalization: &'static str,
}

pub const UNITS: Units = Units {
    temperature: "K",
    energy: "K",
    wave_number: "1/angstrom",
    length: "angstrom",
    density: "1/angstrom^3",
    mass: "amu; effective masses as ratios to the bare mass",
    potential: "K*angstrom^3",
    normalization: "per particle",
};

pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::validation(format!("csv serialization: {e}")))?;
    }
    w.into_inner().map_err(|e| CliError::validation(format!("csv serialization: {e}")))
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value).map_err(|e| CliError::validation(format!("json serialization: {e}")))?;
    v.push(b'\n');
    Ok(v)
}

pub fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    ensure_dir(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

pub fn write_csv<T: Serialize>(dir: &Path, name: &str, rows: &[T]) -> Result<PathBuf> {
    write_file(dir, name, &csv_bytes(rows)?)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    write_file(dir, name, &json_bytes(value)?)
}
