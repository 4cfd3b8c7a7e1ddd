//! Estimator error variance versus Es/N0 with the start of signal known.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::{draw_offsets, random_symbols, wrap_phase};
use crate::channel::{apply_channel, ChannelParams};
use crate::cpm::{lag_samples, optimal_preamble, CpmScheme};
use crate::error::Result;
use crate::estimator::{Estimator, EstimatorConfig};
use crate::rng::{rng_from_seed, split_seed, stream_id};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MseRow {
    pub scheme: String,
    pub esn0_db: f64,
    /// `freq` (fd Ts), `phase` (rad) or `timing` (symbols).
    pub param: String,
    pub mse: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Signed errors of one trial: `(fd Ts, phase, timing)`.
pub type TrialError = (f64, f64, f64);

/// Per-trial errors for one scheme and Es/N0. Trial `i` uses the same
/// offsets and noise seed for every scheme and Es/N0.
pub fn mse_trials(
    cfg: &ExperimentConfig,
    scheme: &CpmScheme,
    esn0_db: f64,
) -> Result<Vec<TrialError>> {
    let ecfg = EstimatorConfig {
        sps: cfg.sps,
        l0: cfg.l0,
        kf: cfg.kf,
        ..Default::default()
    };
    let est = Estimator::new(scheme, ecfg)?;
    let sps = cfg.sps;
    let nl = lag_samples(scheme, sps);
    let pre = optimal_preamble(scheme, cfg.l0)?;
    let id = stream_id("mse");
    (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| {
            let seed = split_seed(cfg.seed, id, i);
            let mut rng = rng_from_seed(seed);
            let (nu, theta, eps) = draw_offsets(&mut rng, sps);
            let delta = rng.random_range(0..=cfg.guard_samples);
            let mut syms = pre.clone();
            syms.extend(random_symbols(scheme, scheme.pulse_len() + 2, &mut rng));
            let p = ChannelParams {
                nu,
                theta,
                eps,
                delta,
                esn0_db,
                seed: split_seed(seed, 0, 0),
            };
            let total = delta + sps * syms.len();
            let stream = apply_channel(scheme, &syms, sps, &p, total)?.samples;
            let w0 = delta + nl;
            let e = est.estimate(&stream[w0..w0 + ecfg.window_len()])?;
            let theta_w = theta + 2.0 * PI * nu * w0 as f64;
            Ok((
                (e.nu_hat - nu) * sps as f64,
                wrap_phase(e.theta_hat - theta_w),
                e.eps_hat - eps,
            ))
        })
        .collect()
}

pub fn mse_of(errors: &[TrialError]) -> (f64, f64, f64) {
    let n = errors.len() as f64;
    let s = errors.iter().fold((0.0, 0.0, 0.0), |a, e| {
        (a.0 + e.0 * e.0, a.1 + e.1 * e.1, a.2 + e.2 * e.2)
    });
    (s.0 / n, s.1 / n, s.2 / n)
}

pub fn run_mse_sweep(cfg: &ExperimentConfig) -> Result<Vec<MseRow>> {
    let mut rows = Vec::new();
    for scheme in cfg.schemes()? {
        for &esn0 in &cfg.sweep.esn0_db {
            let (f, p, t) = mse_of(&mse_trials(cfg, &scheme, esn0)?);
            for (param, mse) in [("freq", f), ("phase", p), ("timing", t)] {
                rows.push(MseRow {
                    scheme: scheme.label(),
                    esn0_db: esn0,
                    param: param.into(),
                    mse,
                    trials: cfg.trials,
                    seed: cfg.seed,
                });
            }
        }
    }
    Ok(rows)
}
