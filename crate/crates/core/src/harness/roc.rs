//! Receiver operating characteristics of the start-of-signal detector.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::draw_offsets;
use crate::channel::{apply_channel, ChannelParams};
use crate::cpm::{optimal_preamble, CpmScheme};
use crate::error::Result;
use crate::framesync::{detect_metric, empirical_threshold, h0_metrics, preamble_reference};
use crate::rng::{rng_from_seed, split_seed, stream_id};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocRow {
    pub gamma: f64,
    pub pfa: f64,
    pub pd: f64,
    #[serde(rename = "Dp")]
    pub dp: usize,
    #[serde(rename = "L0")]
    pub l0: usize,
    pub esn0_db: f64,
}

/// Detector outputs under both hypotheses.
#[derive(Debug, Clone)]
pub struct RocSamples {
    /// Noise-only windows, sorted ascending.
    pub h0: Vec<f64>,
    /// Perfectly aligned preamble windows, sorted ascending.
    pub h1: Vec<f64>,
}

impl RocSamples {
    /// Fractions of `H0` and `H1` outputs strictly above `gamma`.
    pub fn rates(&self, gamma: f64) -> (f64, f64) {
        (tail(&self.h0, gamma), tail(&self.h1, gamma))
    }

    /// Threshold calibrated to `pfa` on the `H0` samples and the resulting
    /// `(gamma, P_FA, P_D)`.
    pub fn at_pfa(&self, pfa: f64) -> Result<(f64, f64, f64)> {
        let g = empirical_threshold(&self.h0, pfa)?;
        let (fa, d) = self.rates(g);
        Ok((g, fa, d))
    }
}

fn tail(sorted: &[f64], gamma: f64) -> f64 {
    let above = sorted.len() - sorted.partition_point(|&x| x <= gamma);
    above as f64 / sorted.len() as f64
}

/// `h0_trials` noise-only and `cfg.trials` aligned windows. The noise-only
/// windows depend only on `(seed, L0)`, so curves for different `D'` share
/// them.
pub fn roc_samples(
    cfg: &ExperimentConfig,
    scheme: &CpmScheme,
    l0: usize,
    dp: usize,
    esn0_db: f64,
    h0_trials: usize,
) -> Result<RocSamples> {
    let sps = cfg.framesync_sps();
    let reference = preamble_reference(scheme, l0, sps)?;
    let np = reference.len();
    let mut h0 = h0_metrics(
        &reference,
        dp,
        esn0_db,
        sps,
        h0_trials,
        split_seed(cfg.seed, stream_id("roc-h0"), l0 as u64),
    )?;
    let pre = optimal_preamble(scheme, l0)?;
    let id = stream_id("roc-h1");
    let mut h1: Vec<f64> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| {
            let seed = split_seed(cfg.seed, id, i);
            let (nu, theta, _) = draw_offsets(&mut rng_from_seed(seed), sps);
            let p = ChannelParams {
                nu,
                theta,
                eps: 0.0,
                delta: 0,
                esn0_db,
                seed: split_seed(seed, 0, 0),
            };
            let w = &apply_channel(scheme, &pre, sps, &p, sps * pre.len())?.samples[..np];
            detect_metric(w, &reference, dp)
        })
        .collect::<Result<_>>()?;
    h0.sort_by(f64::total_cmp);
    h1.sort_by(f64::total_cmp);
    Ok(RocSamples { h0, h1 })
}

/// Runs on the first configured scheme: one curve per `(L0, D', Es/N0)`,
/// thresholds evenly spaced over the pooled metric range plus the
/// thresholds calibrated to the `pfa` grid.
pub fn run_roc(cfg: &ExperimentConfig) -> Result<Vec<RocRow>> {
    let scheme = cfg.schemes()?.remove(0);
    let mut rows = Vec::new();
    for &l0 in &cfg.sweep.l0 {
        for &dp in &cfg.sweep.dp {
            for &esn0 in &cfg.sweep.esn0_db {
                let s = roc_samples(cfg, &scheme, l0, dp, esn0, cfg.framesync.calib_trials)?;
                let lo = s.h0[0].min(s.h1[0]);
                let hi = s.h0[s.h0.len() - 1].max(s.h1[s.h1.len() - 1]);
                let n = cfg.sweep.roc_points;
                let mut gammas: Vec<f64> = (0..n)
                    .map(|k| lo + (hi - lo) * k as f64 / (n.max(2) - 1) as f64)
                    .collect();
                for &pfa in &cfg.sweep.pfa {
                    gammas.push(empirical_threshold(&s.h0, pfa)?);
                }
                gammas.sort_by(f64::total_cmp);
                for gamma in gammas {
                    let (pfa, pd) = s.rates(gamma);
                    rows.push(RocRow {
                        gamma,
                        pfa,
                        pd,
                        dp,
                        l0,
                        esn0_db: esn0,
                    });
                }
            }
        }
    }
    Ok(rows)
}
