//! Experiment configuration (TOML).
//!
//! Every key has a default, so an empty file is a valid configuration. See
//! the README for the full schema.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cpm::{CpmScheme, ModIndex, PulseShape};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    /// Alphabet size.
    pub m: usize,
    /// Modulation index as `"k/p"`.
    pub h: String,
    /// `REC`, `RC` or `GAUSSIAN`.
    pub pulse: String,
    pub l: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bt: Option<f64>,
}

impl SchemeSpec {
    pub fn msk() -> Self {
        Self {
            m: 2,
            h: "1/2".into(),
            pulse: "REC".into(),
            l: 1,
            bt: None,
        }
    }

    pub fn gmsk() -> Self {
        Self {
            m: 2,
            h: "1/2".into(),
            pulse: "GAUSSIAN".into(),
            l: 4,
            bt: Some(0.3),
        }
    }

    pub fn build(&self) -> Result<CpmScheme> {
        let (k, p) = self
            .h
            .split_once('/')
            .and_then(|(k, p)| Some((k.trim().parse().ok()?, p.trim().parse().ok()?)))
            .ok_or_else(|| {
                Error::Config(format!(
                    "modulation index '{}' is not of the form k/p",
                    self.h
                ))
            })?;
        let shape = PulseShape::from_kind(&self.pulse, self.bt)?;
        CpmScheme::new(self.m, ModIndex::new(k, p)?, shape, self.l)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrameSyncSettings {
    /// Samples per symbol for the frame-sync sweeps and threshold tables;
    /// defaults to the global `sps`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sps: Option<usize>,
    /// SoS window length in samples; 0 selects `2 N L0`.
    pub nw: usize,
    /// SoS lag depth `D`.
    pub d: usize,
    /// Detector lag depth `D'`.
    pub dp: usize,
    /// Correction exponent `q`.
    pub q: f64,
    pub target_pfa: f64,
    /// Noise-only windows per threshold calibration.
    pub calib_trials: usize,
    /// Monte Carlo trials for the `R_ss` table.
    pub rss_trials: usize,
    /// Precomputed threshold table (CSV); missing rows are calibrated on
    /// the fly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold_table: Option<PathBuf>,
}

impl Default for FrameSyncSettings {
    fn default() -> Self {
        Self {
            sps: None,
            nw: 0,
            d: 4,
            dp: 4,
            q: 1.0,
            target_pfa: 1e-3,
            calib_trials: 1_000_000,
            rss_trials: 10_000,
            threshold_table: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepAxes {
    pub esn0_db: Vec<f64>,
    pub ebn0_db: Vec<f64>,
    pub l0: Vec<usize>,
    pub q: Vec<f64>,
    pub d: Vec<usize>,
    pub dp: Vec<usize>,
    pub pfa: Vec<f64>,
    /// Number of evenly spaced thresholds per ROC curve.
    pub roc_points: usize,
    /// Preamble lengths for the fig5 table.
    pub fig5_l0: Vec<usize>,
}

impl Default for SweepAxes {
    fn default() -> Self {
        Self {
            esn0_db: vec![0.0, 10.0, 20.0],
            ebn0_db: vec![0.0, 2.0, 4.0, 6.0, 8.0],
            l0: vec![32, 64],
            q: vec![0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5],
            d: vec![2, 4, 8, 63],
            dp: vec![2, 4, 8],
            pfa: vec![1e-1, 1e-2, 1e-3],
            roc_points: 100,
            fig5_l0: vec![8, 16, 32, 64, 128],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Trials per sweep point (bursts per point for `ber`).
    pub trials: usize,
    /// Samples per symbol.
    pub sps: usize,
    /// FFT zero-padding factor.
    pub kf: usize,
    /// Preamble length in symbols.
    pub l0: usize,
    /// Unique-word length in bits.
    pub l_uw: usize,
    /// Payload length in bits.
    pub l_pay: usize,
    /// The burst starts uniformly within `0 ..= guard_samples`.
    pub guard_samples: usize,
    /// Phase-tracker noise bandwidth `Bn Ts` in the full chain; 0 disables.
    pub tracker_bw: f64,
    /// Tracker loop order, 1 or 2.
    pub tracker_order: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Worker threads; never affects results.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub schemes: Vec<SchemeSpec>,
    pub framesync: FrameSyncSettings,
    pub sweep: SweepAxes,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 2024,
            trials: 10_000,
            sps: 2,
            kf: 2,
            l0: 64,
            l_uw: 32,
            l_pay: 512,
            guard_samples: 64,
            tracker_bw: 0.01,
            tracker_order: 2,
            out: None,
            threads: None,
            schemes: vec![SchemeSpec::gmsk()],
            framesync: FrameSyncSettings::default(),
            sweep: SweepAxes::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.trials == 0 {
            return bad("trials must be >= 1");
        }
        if self.sps == 0 || self.framesync.sps == Some(0) {
            return bad("samples per symbol must be >= 1");
        }
        if !(1..=2).contains(&self.tracker_order) || !(self.tracker_bw >= 0.0) {
            return bad("tracker_order must be 1 or 2 and tracker_bw >= 0");
        }
        if self.schemes.is_empty() {
            return bad("at least one scheme is required");
        }
        let s = &self.sweep;
        if s.esn0_db.is_empty()
            || s.ebn0_db.is_empty()
            || s.l0.is_empty()
            || s.q.is_empty()
            || s.d.is_empty()
            || s.dp.is_empty()
            || s.pfa.is_empty()
            || s.fig5_l0.is_empty()
            || s.roc_points == 0
        {
            return bad("every sweep axis must be nonempty");
        }
        for spec in &self.schemes {
            spec.build()?;
        }
        Ok(())
    }

    pub fn schemes(&self) -> Result<Vec<CpmScheme>> {
        self.schemes.iter().map(SchemeSpec::build).collect()
    }

    pub fn framesync_sps(&self) -> usize {
        self.framesync.sps.unwrap_or(self.sps)
    }

    /// SoS window for a preamble of `l0` symbols at `sps`.
    pub fn window_len(&self, l0: usize, sps: usize) -> usize {
        if self.framesync.nw == 0 {
            2 * sps * l0
        } else {
            self.framesync.nw
        }
    }

    /// SHA-256 (first 16 hex digits) of the canonical TOML form, ignoring
    /// the output path and thread count.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        c.threads = None;
        let text = c.to_toml().unwrap_or_default();
        hex::encode(&Sha256::digest(text.as_bytes())[..8])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_default() {
        assert_eq!(
            ExperimentConfig::from_toml_str("").unwrap(),
            ExperimentConfig::default()
        );
    }

    #[test]
    fn round_trip_and_hash() {
        let text = r#"
seed = 7
trials = 100
[[schemes]]
m = 4
h = "1/4"
pulse = "RC"
l = 2
[framesync]
sps = 1
q = 0.5
[sweep]
esn0_db = [1.0, inf]
"#;
        let c = ExperimentConfig::from_toml_str(text).unwrap();
        assert_eq!(c.schemes().unwrap()[0].label(), "2RC M=4 h=1/4");
        assert_eq!(c.sweep.esn0_db[1], f64::INFINITY);
        let back = ExperimentConfig::from_toml_str(&c.to_toml().unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
        let mut d = c.clone();
        d.threads = Some(8);
        d.out = Some("x.csv".into());
        assert_eq!(d.hash(), c.hash());
        d.seed = 8;
        assert_ne!(d.hash(), c.hash());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentConfig::from_toml_str("trials = 0").is_err());
        assert!(ExperimentConfig::from_toml_str("bogus = 1").is_err());
        assert!(ExperimentConfig::from_toml_str("[sweep]\nq = []").is_err());
        assert!(ExperimentConfig::from_toml_str(
            "[[schemes]]\nm = 2\nh = \"1\"\npulse = \"RC\"\nl = 1"
        )
        .is_err());
        assert!(ExperimentConfig::from_toml_str(
            "[[schemes]]\nm = 2\nh = \"1/2\"\npulse = \"GAUSSIAN\"\nl = 4"
        )
        .is_err());
    }
}
