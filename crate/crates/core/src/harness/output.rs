//! CSV emission. Each file starts with a `#` comment line carrying the
//! experiment name, schema version, config hash and seed.

use std::path::Path;

use serde::Serialize;

use super::config::ExperimentConfig;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

pub fn header_line(experiment: &str, cfg: &ExperimentConfig) -> String {
    format!(
        "# cpmsync experiment={experiment} schema={SCHEMA_VERSION} config_hash={} seed={}",
        cfg.hash(),
        cfg.seed
    )
}

pub fn to_csv<T: Serialize>(
    experiment: &str,
    cfg: &ExperimentConfig,
    rows: &[T],
) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    let body = String::from_utf8(body).map_err(|e| Error::Config(e.to_string()))?;
    Ok(format!("{}\n{body}", header_line(experiment, cfg)))
}

pub fn write_csv<T: Serialize>(
    path: &Path,
    experiment: &str,
    cfg: &ExperimentConfig,
    rows: &[T],
) -> Result<()> {
    std::fs::write(path, to_csv(experiment, cfg, rows)?)?;
    Ok(())
}

/// Reads rows back, skipping `#` comment lines.
pub fn read_csv<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)?;
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}
