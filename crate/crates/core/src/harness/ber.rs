//! Bit error rate of the burst receiver, with ideal synchronization or
//! with the full chain (detection, SoS estimation, data-aided estimation,
//! Viterbi demodulation, unique-word alignment).

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::threshold::{calibrate, ThresholdTable};
use super::{draw_offsets, random_bits};
use crate::channel::{apply_channel, ChannelParams};
use crate::cpm::{lag_samples, CpmScheme};
use crate::demod::{
    bits_per_symbol, build_trellis, count_bit_errors, demodulate_burst, BurstLayout, BurstSync,
    CpmTrellis, ReceiverConfig, TrackerConfig,
};
use crate::error::Result;
use crate::estimator::{Estimator, EstimatorConfig};
use crate::framesync::{
    acquire, preamble_reference, rss_table, DetectorConfig, SosEstimatorConfig,
};
use crate::rng::{rng_from_seed, split_seed, stream_id};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyncMode {
    IdealSync,
    FullChain,
}

impl SyncMode {
    pub fn name(&self) -> &'static str {
        match self {
            SyncMode::IdealSync => "ideal_sync",
            SyncMode::FullChain => "full_chain",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerRow {
    pub scheme: String,
    pub ebn0_db: f64,
    pub ber: f64,
    pub bits: usize,
    pub mode: SyncMode,
}

/// Aggregated outcome of one BER point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BerStats {
    pub errors: usize,
    pub bits: usize,
    /// Bursts never detected; each is charged half its payload in errors.
    pub missed: usize,
    /// Bursts whose unique word was not found (nominal alignment used).
    pub uw_not_found: usize,
}

impl BerStats {
    pub fn ber(&self) -> f64 {
        self.errors as f64 / self.bits as f64
    }

    fn add(self, o: Self) -> Self {
        Self {
            errors: self.errors + o.errors,
            bits: self.bits + o.bits,
            missed: self.missed + o.missed,
            uw_not_found: self.uw_not_found + o.uw_not_found,
        }
    }
}

/// Everything the receiver needs for one scheme.
pub struct BurstReceiver {
    pub scheme: CpmScheme,
    pub layout: BurstLayout,
    trellis: CpmTrellis,
    estimator: Estimator,
    reference: Vec<Complex64>,
    rss: Vec<f64>,
    sps: usize,
    nw: usize,
    d: usize,
    dp: usize,
    q: f64,
    tracker: Option<TrackerConfig>,
}

impl BurstReceiver {
    pub fn new(cfg: &ExperimentConfig, scheme: &CpmScheme) -> Result<Self> {
        let sps = cfg.sps;
        let ecfg = EstimatorConfig {
            sps,
            l0: cfg.l0,
            kf: cfg.kf,
            ..Default::default()
        };
        Ok(Self {
            scheme: scheme.clone(),
            layout: BurstLayout::new(scheme, cfg.l0, cfg.l_uw, cfg.l_pay)?,
            trellis: build_trellis(scheme, sps)?,
            estimator: Estimator::new(scheme, ecfg)?,
            reference: preamble_reference(scheme, cfg.l0, sps)?,
            rss: rss_table(
                scheme,
                sps,
                cfg.framesync.rss_trials,
                split_seed(cfg.seed, stream_id("rss"), 0),
            )?,
            sps,
            nw: cfg.window_len(cfg.l0, sps),
            d: cfg.framesync.d,
            dp: cfg.framesync.dp,
            q: cfg.framesync.q,
            tracker: (cfg.tracker_bw > 0.0).then_some(TrackerConfig {
                loop_bw: cfg.tracker_bw,
                order: cfg.tracker_order,
            }),
        })
    }

    /// Transmits and receives one burst. Returns the bit errors, the payload
    /// size and whether the burst was detected and its unique word found.
    pub fn run_burst(
        &self,
        cfg: &ExperimentConfig,
        esn0_db: f64,
        gamma: f64,
        mode: SyncMode,
        seed: u64,
    ) -> Result<BerStats> {
        let scheme = &self.scheme;
        let sps = self.sps;
        let bps = bits_per_symbol(scheme)?;
        let mut rng = rng_from_seed(seed);
        let payload = random_bits(self.layout.l_pay * bps, &mut rng);
        let pad = random_bits(scheme.pulse_len() * bps, &mut rng);
        let (nu, theta, eps) = draw_offsets(&mut rng, sps);
        let delta = rng.random_range(0..=cfg.guard_samples);
        let syms = self.layout.burst_symbols(scheme, &payload, &pad)?;
        let p = ChannelParams {
            nu,
            theta,
            eps,
            delta,
            esn0_db,
            seed: split_seed(seed, 0, 0),
        };
        let total = delta + sps * syms.len() + self.nw;
        let stream = apply_channel(scheme, &syms, sps, &p, total)?.samples;
        let bits = payload.len();
        let lost = BerStats {
            errors: bits / 2,
            bits,
            missed: 1,
            uw_not_found: 0,
        };

        let (sync, rx) = match mode {
            SyncMode::IdealSync => (
                BurstSync {
                    delta,
                    eps,
                    nu,
                    theta0: theta,
                },
                ReceiverConfig { tracker: None },
            ),
            SyncMode::FullChain => {
                let det = DetectorConfig {
                    np: self.reference.len(),
                    dp: self.dp,
                    gamma,
                };
                let sos = SosEstimatorConfig {
                    nw: self.nw,
                    d: self.d,
                    q: self.q,
                    rss: self.rss.clone(),
                };
                let fs = acquire(&stream, &self.reference, &det, &sos)?;
                let w0 = fs.delta_hat + lag_samples(scheme, sps);
                let wl = self.estimator.config().window_len();
                if !fs.detected || w0 + wl > stream.len() {
                    return Ok(lost);
                }
                let e = self.estimator.estimate(&stream[w0..w0 + wl])?;
                (
                    BurstSync {
                        delta: fs.delta_hat,
                        eps: e.eps_hat,
                        nu: e.nu_hat,
                        theta0: e.theta_hat - 2.0 * PI * e.nu_hat * w0 as f64,
                    },
                    ReceiverConfig {
                        tracker: self.tracker,
                    },
                )
            }
        };
        let d = demodulate_burst(&stream, &self.trellis, &self.layout, &sync, &rx)?;
        Ok(BerStats {
            errors: count_bit_errors(&d.payload, &payload),
            bits,
            missed: 0,
            uw_not_found: usize::from(d.uw_shift.is_none()),
        })
    }
}

/// Detector threshold for the full chain: from the configured table when
/// it has the entry, calibrated on the fly otherwise.
pub fn detector_threshold(
    cfg: &ExperimentConfig,
    table: Option<&ThresholdTable>,
    scheme: &CpmScheme,
    esn0_db: f64,
) -> Result<f64> {
    let np = cfg.sps * cfg.l0;
    let (dp, pfa) = (cfg.framesync.dp, cfg.framesync.target_pfa);
    if let Some(g) = table.and_then(|t| t.lookup(&scheme.label(), np, dp, esn0_db, pfa)) {
        return Ok(g);
    }
    Ok(calibrate(cfg, scheme, cfg.l0, cfg.sps, dp, esn0_db, &[pfa])?[0].gamma)
}

pub fn esn0_from_ebn0(scheme: &CpmScheme, ebn0_db: f64) -> f64 {
    ebn0_db + 10.0 * (scheme.alphabet_size() as f64).log2().log10()
}

/// Per-burst outcomes of `cfg.trials` bursts at one Eb/N0. Burst `i` uses
/// the same data, offsets and noise seed for every Eb/N0 and mode.
pub fn burst_stats(
    cfg: &ExperimentConfig,
    rx: &BurstReceiver,
    ebn0_db: f64,
    mode: SyncMode,
    gamma: f64,
) -> Result<Vec<BerStats>> {
    let esn0 = esn0_from_ebn0(&rx.scheme, ebn0_db);
    let id = stream_id("ber");
    (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| rx.run_burst(cfg, esn0, gamma, mode, split_seed(cfg.seed, id, i)))
        .collect()
}

pub fn ber_point(
    cfg: &ExperimentConfig,
    rx: &BurstReceiver,
    ebn0_db: f64,
    mode: SyncMode,
    gamma: f64,
) -> Result<BerStats> {
    Ok(burst_stats(cfg, rx, ebn0_db, mode, gamma)?
        .into_iter()
        .fold(BerStats::default(), BerStats::add))
}

pub fn run_ber(cfg: &ExperimentConfig) -> Result<Vec<BerRow>> {
    let table = cfg
        .framesync
        .threshold_table
        .as_deref()
        .map(ThresholdTable::load)
        .transpose()?;
    let mut rows = Vec::new();
    for scheme in cfg.schemes()? {
        let rx = BurstReceiver::new(cfg, &scheme)?;
        let mut gammas = HashMap::new();
        for &ebn0 in &cfg.sweep.ebn0_db {
            for mode in [SyncMode::IdealSync, SyncMode::FullChain] {
                let gamma = match mode {
                    SyncMode::IdealSync => 0.0,
                    SyncMode::FullChain => {
                        let esn0 = esn0_from_ebn0(&scheme, ebn0);
                        match gammas.get(&esn0.to_bits()) {
                            Some(&g) => g,
                            None => {
                                let g = detector_threshold(cfg, table.as_ref(), &scheme, esn0)?;
                                gammas.insert(esn0.to_bits(), g);
                                g
                            }
                        }
                    }
                };
                let s = ber_point(cfg, &rx, ebn0, mode, gamma)?;
                rows.push(BerRow {
                    scheme: scheme.label(),
                    ebn0_db: ebn0,
                    ber: s.ber(),
                    bits: s.bits,
                    mode,
                });
            }
        }
    }
    Ok(rows)
}

/// Eb/N0 at which a BER curve crosses `target`, by linear interpolation of
/// `log10(BER)` between the bracketing points. `points` must be sorted by
/// Eb/N0.
pub fn ebn0_at_ber(points: &[(f64, f64)], target: f64) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let ((x0, b0), (x1, b1)) = (w[0], w[1]);
        if b0 >= target && b1 <= target && b0 > 0.0 && b1 > 0.0 {
            let (l0, l1, lt) = (b0.log10(), b1.log10(), target.log10());
            Some(if l0 == l1 {
                x0
            } else {
                x0 + (x1 - x0) * (l0 - lt) / (l0 - l1)
            })
        } else {
            None
        }
    })
}
