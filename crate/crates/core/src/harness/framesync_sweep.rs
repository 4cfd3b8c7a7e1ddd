//! Start-of-signal estimation: probability of false lock and bias versus
//! the correction exponent `q`, the lag depth `D`, Es/N0 and L0.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::{draw_offsets, random_symbols};
use crate::channel::{apply_channel, ChannelParams};
use crate::cpm::{optimal_preamble, CpmScheme};
use crate::error::{invalid, Result};
use crate::framesync::{preamble_reference, rss_table, sos_argmax, sos_bracket};
use crate::rng::{rng_from_seed, split_seed, stream_id};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSyncRow {
    pub q: f64,
    #[serde(rename = "D")]
    pub d: usize,
    pub esn0_db: f64,
    #[serde(rename = "L0")]
    pub l0: usize,
    pub pfl: f64,
    pub bias: f64,
    pub trials: usize,
}

/// One SoS window: the preamble starts at a uniform `delta` in
/// `0 ..= Nw - Np`, preceded by noise and followed by random data.
pub fn sos_window(
    scheme: &CpmScheme,
    l0: usize,
    sps: usize,
    nw: usize,
    esn0_db: f64,
    seed: u64,
) -> Result<(Vec<num_complex::Complex64>, usize)> {
    let np = sps * l0;
    if nw < np {
        return invalid(format!("Nw = {nw} shorter than Np = {np}"));
    }
    let mut rng = rng_from_seed(seed);
    let delta = rng.random_range(0..=nw - np);
    let (nu, theta, _) = draw_offsets(&mut rng, sps);
    let mut syms = optimal_preamble(scheme, l0)?;
    syms.extend(random_symbols(scheme, nw / sps + 1, &mut rng));
    let p = ChannelParams {
        nu,
        theta,
        eps: 0.0,
        delta,
        esn0_db,
        seed: split_seed(seed, 0, 0),
    };
    Ok((
        apply_channel(scheme, &syms, sps, &p, nw.max(delta + sps * syms.len()))?.samples[..nw]
            .to_vec(),
        delta,
    ))
}

/// Signed estimation errors `delta_hat - delta`, indexed `[d][q][trial]`.
pub fn sos_errors(
    cfg: &ExperimentConfig,
    scheme: &CpmScheme,
    l0: usize,
    esn0_db: f64,
    ds: &[usize],
    qs: &[f64],
) -> Result<Vec<Vec<Vec<i64>>>> {
    let sps = cfg.framesync_sps();
    let nw = cfg.window_len(l0, sps);
    let reference = preamble_reference(scheme, l0, sps)?;
    let rss = rss_table(
        scheme,
        sps,
        cfg.framesync.rss_trials,
        split_seed(cfg.seed, stream_id("rss"), 0),
    )?;
    let id = stream_id("framesync");
    let per_trial: Vec<Vec<Vec<i64>>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| {
            let (w, delta) = sos_window(scheme, l0, sps, nw, esn0_db, split_seed(cfg.seed, id, i))?;
            ds.iter()
                .map(|&d| {
                    let b = sos_bracket(&w, &reference, d, &rss)?;
                    Ok(qs
                        .iter()
                        .map(|&q| sos_argmax(&b, nw, q).0 as i64 - delta as i64)
                        .collect())
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok((0..ds.len())
        .map(|di| {
            (0..qs.len())
                .map(|qi| per_trial.iter().map(|t| t[di][qi]).collect())
                .collect()
        })
        .collect())
}

/// `(P_FL, bias)` from signed errors.
pub fn pfl_bias(errors: &[i64]) -> (f64, f64) {
    let n = errors.len() as f64;
    let wrong = errors.iter().filter(|&&e| e != 0).count() as f64;
    (wrong / n, errors.iter().sum::<i64>() as f64 / n)
}

/// Runs on the first configured scheme.
pub fn run_framesync_sweep(cfg: &ExperimentConfig) -> Result<Vec<FrameSyncRow>> {
    let scheme = cfg.schemes()?.remove(0);
    let mut rows = Vec::new();
    for &l0 in &cfg.sweep.l0 {
        for &esn0 in &cfg.sweep.esn0_db {
            let errs = sos_errors(cfg, &scheme, l0, esn0, &cfg.sweep.d, &cfg.sweep.q)?;
            for (di, &d) in cfg.sweep.d.iter().enumerate() {
                for (qi, &q) in cfg.sweep.q.iter().enumerate() {
                    let (pfl, bias) = pfl_bias(&errs[di][qi]);
                    rows.push(FrameSyncRow {
                        q,
                        d,
                        esn0_db: esn0,
                        l0,
                        pfl,
                        bias,
                        trials: cfg.trials,
                    });
                }
            }
        }
    }
    Ok(rows)
}
