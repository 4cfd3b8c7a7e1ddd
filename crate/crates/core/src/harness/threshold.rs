//! Detector threshold tables.

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::cpm::CpmScheme;
use crate::error::{Error, Result};
use crate::framesync::{empirical_threshold, h0_metrics, preamble_reference};
use crate::rng::{split_seed, stream_id};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub scheme: String,
    #[serde(rename = "Np")]
    pub np: usize,
    #[serde(rename = "Dp")]
    pub dp: usize,
    pub esn0_db: f64,
    pub target_pfa: f64,
    pub gamma: f64,
}

/// Seed of the noise-only windows for one table entry.
fn calib_seed(cfg: &ExperimentConfig, np: usize, dp: usize, esn0_db: f64) -> u64 {
    let s = split_seed(cfg.seed, stream_id("threshold"), np as u64);
    split_seed(s, dp as u64, esn0_db.to_bits())
}

/// Thresholds for every `pfa` in `pfas` from one set of noise-only windows.
pub fn calibrate(
    cfg: &ExperimentConfig,
    scheme: &CpmScheme,
    l0: usize,
    sps: usize,
    dp: usize,
    esn0_db: f64,
    pfas: &[f64],
) -> Result<Vec<ThresholdRow>> {
    let trials = cfg.framesync.calib_trials;
    for &pfa in pfas {
        if pfa * (trials as f64) < 100.0 {
            return Err(Error::Unreliable(format!(
                "target P_FA {pfa} with {trials} windows gives fewer than 100 expected exceedances"
            )));
        }
    }
    let reference = preamble_reference(scheme, l0, sps)?;
    let np = reference.len();
    let h0 = h0_metrics(
        &reference,
        dp,
        esn0_db,
        sps,
        trials,
        calib_seed(cfg, np, dp, esn0_db),
    )?;
    pfas.iter()
        .map(|&pfa| {
            Ok(ThresholdRow {
                scheme: scheme.label(),
                np,
                dp,
                esn0_db,
                target_pfa: pfa,
                gamma: empirical_threshold(&h0, pfa)?,
            })
        })
        .collect()
}

/// One row per `(scheme, L0, D', Es/N0, pfa)`.
pub fn run_calibrate_threshold(cfg: &ExperimentConfig) -> Result<Vec<ThresholdRow>> {
    let sps = cfg.framesync_sps();
    let mut points = Vec::new();
    for scheme in cfg.schemes()? {
        for &l0 in &cfg.sweep.l0 {
            for &dp in &cfg.sweep.dp {
                for &esn0 in &cfg.sweep.esn0_db {
                    points.push((scheme.clone(), l0, dp, esn0));
                }
            }
        }
    }
    // Each entry is already parallel inside; run entries in order.
    let tables: Vec<Vec<ThresholdRow>> = points
        .iter()
        .map(|(s, l0, dp, esn0)| calibrate(cfg, s, *l0, sps, *dp, *esn0, &cfg.sweep.pfa))
        .collect::<Result<_>>()?;
    Ok(tables.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Default)]
pub struct ThresholdTable {
    pub rows: Vec<ThresholdRow>,
}

impl ThresholdTable {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        Ok(Self {
            rows: super::output::read_csv(path)?,
        })
    }

    pub fn lookup(
        &self,
        scheme: &str,
        np: usize,
        dp: usize,
        esn0_db: f64,
        pfa: f64,
    ) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| {
                r.scheme == scheme
                    && r.np == np
                    && r.dp == dp
                    && (r.esn0_db - esn0_db).abs() < 1e-9
                    && (r.target_pfa / pfa - 1.0).abs() < 1e-9
            })
            .map(|r| r.gamma)
    }
}
