//! Start-of-signal detection and estimation.
//!
//! Both statistics work on lag products `r*[n] r[n+d]`: a frequency offset
//! turns each lag's sum into the same sum times `exp(j 2 pi nu d)`, which the
//! per-lag magnitude removes, so neither the detector nor the estimator
//! needs a frequency or phase estimate.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::noise_only;
use crate::cpm::{modulate, optimal_preamble, signal_autocorrelation, CpmScheme};
use crate::error::{invalid, Error, Result};
use crate::rng::{split_seed, stream_id};

/// Autocorrelation values below this magnitude are treated as zero.
pub const RSS_CLAMP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    /// Preamble length in samples.
    pub np: usize,
    /// Number of lags `D'`.
    pub dp: usize,
    /// Threshold.
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SosEstimatorConfig {
    /// Observation window length in samples.
    pub nw: usize,
    /// Number of lags `D`.
    pub d: usize,
    /// Correction exponent.
    pub q: f64,
    /// Real part of `R_ss(d)`, `d = 0 ..`; missing lags count as zero.
    pub rss: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSyncResult {
    pub detected: bool,
    /// Stream index of the first threshold crossing.
    pub detect_index: usize,
    /// Start-of-signal estimate (absolute stream index once located).
    pub delta_hat: usize,
    /// Winning SoS likelihood.
    pub metric: f64,
}

/// Noiseless preamble at nominal timing, first `N * L0` samples.
pub fn preamble_reference(scheme: &CpmScheme, l0: usize, sps: usize) -> Result<Vec<Complex64>> {
    let syms = optimal_preamble(scheme, l0)?;
    let mut s = modulate(scheme, &syms, sps)?.samples;
    s.truncate(l0 * sps);
    Ok(s)
}

/// `R_ss(d)` for `d < L * N`, real part, clamped to zero below
/// [`RSS_CLAMP`].
pub fn rss_table(scheme: &CpmScheme, sps: usize, trials: usize, seed: u64) -> Result<Vec<f64>> {
    let len = scheme.pulse_len() * sps;
    let r = signal_autocorrelation(scheme, sps, len - 1, trials, seed)?;
    Ok(r.iter()
        .map(|z| if z.norm() < RSS_CLAMP { 0.0 } else { z.re })
        .collect())
}

/// `sum_{d=1}^{D'} | sum_n r*[n] r[n+d] s[n] s*[n+d] |`.
pub fn detect_metric(rp: &[Complex64], preamble_ref: &[Complex64], dp: usize) -> Result<f64> {
    let np = preamble_ref.len();
    if rp.len() != np {
        return Err(Error::LengthMismatch {
            expected: np,
            actual: rp.len(),
        });
    }
    if dp == 0 || dp >= np {
        return invalid(format!("D' = {dp} outside [1, {np})"));
    }
    Ok(detect_metric_unchecked(rp, preamble_ref, dp))
}

fn detect_metric_unchecked(rp: &[Complex64], s: &[Complex64], dp: usize) -> f64 {
    let np = s.len();
    (1..=dp)
        .map(|d| {
            (0..np - d)
                .map(|n| (rp[n].conj() * rp[n + d]) * (s[n] * s[n + d].conj()))
                .sum::<Complex64>()
                .norm()
        })
        .sum()
}

/// Slides the detector one sample at a time and reports the first position
/// whose metric exceeds `gamma`.
pub fn detect_stream(
    stream: &[Complex64],
    preamble_ref: &[Complex64],
    cfg: &DetectorConfig,
) -> Result<FrameSyncResult> {
    check_detector(cfg, preamble_ref)?;
    let np = cfg.np;
    if stream.len() >= np {
        for i in 0..=stream.len() - np {
            let m = detect_metric_unchecked(&stream[i..i + np], preamble_ref, cfg.dp);
            if m > cfg.gamma {
                return Ok(FrameSyncResult {
                    detected: true,
                    detect_index: i,
                    delta_hat: i,
                    metric: m,
                });
            }
        }
    }
    Ok(FrameSyncResult {
        detected: false,
        detect_index: 0,
        delta_hat: 0,
        metric: 0.0,
    })
}

fn check_detector(cfg: &DetectorConfig, preamble_ref: &[Complex64]) -> Result<()> {
    if preamble_ref.len() != cfg.np {
        return Err(Error::LengthMismatch {
            expected: cfg.np,
            actual: preamble_ref.len(),
        });
    }
    if cfg.dp == 0 || cfg.dp >= cfg.np {
        return invalid(format!("D' = {} outside [1, {})", cfg.dp, cfg.np));
    }
    Ok(())
}

/// Detection followed by SoS estimation. After the first crossing the
/// detector keeps sliding for another `Np` positions; the `Nw` window is
/// centred on the position of the largest detector output, and the SoS
/// estimate inside it is returned as an absolute stream index.
pub fn acquire(
    stream: &[Complex64],
    preamble_ref: &[Complex64],
    det: &DetectorConfig,
    sos: &SosEstimatorConfig,
) -> Result<FrameSyncResult> {
    let first = detect_stream(stream, preamble_ref, det)?;
    if !first.detected {
        return Ok(first);
    }
    let np = det.np;
    let last = (first.detect_index + np).min(stream.len() - np);
    let mut peak = (first.detect_index, first.metric);
    for i in first.detect_index + 1..=last {
        let m = detect_metric_unchecked(&stream[i..i + np], preamble_ref, det.dp);
        if m > peak.1 {
            peak = (i, m);
        }
    }
    if stream.len() < sos.nw {
        return invalid("stream shorter than the SoS window");
    }
    let start = peak
        .0
        .saturating_sub((sos.nw - np) / 2)
        .min(stream.len() - sos.nw);
    let (delta, metric) =
        sos_estimate_with_metric(&stream[start..start + sos.nw], preamble_ref, sos)?;
    Ok(FrameSyncResult {
        detected: true,
        detect_index: first.detect_index,
        delta_hat: start + delta,
        metric,
    })
}

/// Per-candidate bracket of the SoS likelihood (everything except the
/// correction factor) for `delta = 0 ..= Nw - Np`, plus the number of complex
/// multiplications spent.
pub fn sos_bracket_counted(
    window: &[Complex64],
    preamble_ref: &[Complex64],
    d_max: usize,
    rss: &[f64],
) -> Result<(Vec<f64>, u64)> {
    let nw = window.len();
    let np = preamble_ref.len();
    if nw <= np {
        return invalid(format!(
            "window of {nw} samples is not longer than the {np}-sample preamble"
        ));
    }
    if d_max == 0 || d_max >= np {
        return invalid(format!("D = {d_max} outside [1, {np})"));
    }
    let ncand = nw - np + 1;
    let mut ops = 0u64;

    // Energy from each candidate to the end of the window.
    let mut energy = vec![0.0; nw + 1];
    for n in (0..nw).rev() {
        energy[n] = energy[n + 1] + window[n].norm_sqr();
    }
    let mut bracket: Vec<f64> = energy[..ncand].to_vec();

    let mut y = vec![Complex64::new(0.0, 0.0); nw];
    let mut suffix = vec![Complex64::new(0.0, 0.0); nw + 1];
    for d in 1..=d_max {
        let ny = nw - d;
        for n in 0..ny {
            y[n] = window[n].conj() * window[n + d];
        }
        ops += ny as u64;
        suffix[ny] = Complex64::new(0.0, 0.0);
        for n in (0..ny).rev() {
            suffix[n] = suffix[n + 1] + y[n];
        }
        let r = rss.get(d).copied().unwrap_or(0.0);
        let c: Vec<Complex64> = (0..np - d)
            .map(|m| preamble_ref[m] * preamble_ref[m + d].conj())
            .collect();
        ops += (np - d) as u64;
        for (delta, b) in bracket.iter_mut().enumerate() {
            let corr: Complex64 = y[delta..delta + np - d]
                .iter()
                .zip(&c)
                .map(|(a, b)| a * b)
                .sum();
            ops += (np - d) as u64;
            let tail = if np + delta < ny {
                suffix[np + delta]
            } else {
                Complex64::new(0.0, 0.0)
            };
            *b += 2.0 * (corr + tail * r).norm();
        }
    }
    Ok((bracket, ops))
}

pub fn sos_bracket(
    window: &[Complex64],
    preamble_ref: &[Complex64],
    d_max: usize,
    rss: &[f64],
) -> Result<Vec<f64>> {
    sos_bracket_counted(window, preamble_ref, d_max, rss).map(|(b, _)| b)
}

/// `argmax_delta (Nw - delta)^q * bracket[delta]`, ties to the smallest delta.
pub fn sos_argmax(bracket: &[f64], nw: usize, q: f64) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (delta, b) in bracket.iter().enumerate() {
        let m = correction(nw, delta, q) * b;
        if m > best.1 {
            best = (delta, m);
        }
    }
    best
}

/// `C(delta) = (Nw - delta)^q`.
pub fn correction(nw: usize, delta: usize, q: f64) -> f64 {
    if q == 0.0 {
        1.0
    } else {
        ((nw - delta) as f64).powf(q)
    }
}

/// SoS estimate within an `Nw`-sample window.
pub fn sos_estimate(
    window: &[Complex64],
    preamble_ref: &[Complex64],
    cfg: &SosEstimatorConfig,
) -> Result<usize> {
    sos_estimate_with_metric(window, preamble_ref, cfg).map(|(d, _)| d)
}

fn sos_estimate_with_metric(
    window: &[Complex64],
    preamble_ref: &[Complex64],
    cfg: &SosEstimatorConfig,
) -> Result<(usize, f64)> {
    if window.len() != cfg.nw {
        return Err(Error::LengthMismatch {
            expected: cfg.nw,
            actual: window.len(),
        });
    }
    if !(cfg.q >= 0.0) {
        return invalid(format!("q = {} must be >= 0", cfg.q));
    }
    let b = sos_bracket(window, preamble_ref, cfg.d, &cfg.rss)?;
    Ok(sos_argmax(&b, cfg.nw, cfg.q))
}

/// Detector outputs over `trials` independent noise-only windows; window
/// `i` uses seed `split_seed(seed, "h0", i)`.
pub fn h0_metrics(
    preamble_ref: &[Complex64],
    dp: usize,
    esn0_db: f64,
    sps: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let np = preamble_ref.len();
    if dp == 0 || dp >= np {
        return invalid(format!("D' = {dp} outside [1, {np})"));
    }
    let id = stream_id("h0");
    Ok((0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let w = noise_only(np, esn0_db, sps, split_seed(seed, id, i)).samples;
            detect_metric_unchecked(&w, preamble_ref, dp)
        })
        .collect())
}

/// Threshold exceeded by a fraction `target_pfa` of `samples`: with `n`
/// sorted values and `k = floor(target_pfa * n)`, the value with exactly `k`
/// samples above it (barring ties).
pub fn empirical_threshold(samples: &[f64], target_pfa: f64) -> Result<f64> {
    if samples.is_empty() || !(target_pfa > 0.0 && target_pfa < 1.0) {
        return invalid("need samples and 0 < target_pfa < 1");
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let k = (target_pfa * v.len() as f64).floor() as usize;
    Ok(v[v.len() - 1 - k.min(v.len() - 1)])
}

/// Neyman-Pearson threshold from noise-only Monte Carlo.
#[allow(clippy::too_many_arguments)]
pub fn calibrate_threshold(
    preamble_ref: &[Complex64],
    dp: usize,
    esn0_db: f64,
    sps: usize,
    target_pfa: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if !(target_pfa > 0.0 && target_pfa < 1.0) {
        return invalid(format!("target P_FA {target_pfa} outside (0, 1)"));
    }
    if target_pfa * (trials as f64) < 100.0 {
        return Err(Error::Unreliable(format!(
            "target P_FA {target_pfa} with {trials} trials gives fewer than 100 expected exceedances"
        )));
    }
    let h0 = h0_metrics(preamble_ref, dp, esn0_db, sps, trials, seed)?;
    empirical_threshold(&h0, target_pfa)
}
