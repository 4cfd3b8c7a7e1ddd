//! Monte Carlo experiment drivers.
//!
//! Every experiment is a pure function of the configuration: trial `i`
//! draws from `split_seed(seed, stream_id(experiment), i)`, trials run on
//! the rayon pool, and results are collected in trial order before any
//! floating-point reduction, so the output does not depend on the number
//! of worker threads.

pub mod ber;
pub mod config;
pub mod fig5;
pub mod framesync_sweep;
pub mod mse;
pub mod output;
pub mod roc;
pub mod threshold;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::cpm::CpmScheme;

pub use ber::{
    ber_point, burst_stats, detector_threshold, ebn0_at_ber, esn0_from_ebn0, run_ber, BerRow,
    BerStats, BurstReceiver, SyncMode,
};
pub use config::{ExperimentConfig, FrameSyncSettings, SchemeSpec, SweepAxes};
pub use fig5::{run_fig5, Fig5Row};
pub use framesync_sweep::{pfl_bias, run_framesync_sweep, sos_errors, FrameSyncRow};
pub use mse::{mse_of, mse_trials, run_mse_sweep, MseRow};
pub use output::{read_csv, to_csv, write_csv};
pub use roc::{roc_samples, run_roc, RocRow, RocSamples};
pub use threshold::{run_calibrate_threshold, ThresholdRow, ThresholdTable};

/// Random `(nu, theta, eps)`: `fd Ts` uniform in `[-0.5, 0.5)` (so
/// `nu = fd Ts / N`), `theta` uniform in `[0, 2 pi)`, `eps` uniform in
/// `(-0.5, 0.5)`.
pub fn draw_offsets<R: Rng + ?Sized>(rng: &mut R, sps: usize) -> (f64, f64, f64) {
    let nu = rng.random_range(-0.5..0.5) / sps as f64;
    let theta = rng.random_range(0.0..2.0 * PI);
    let eps = loop {
        let e: f64 = rng.random_range(-0.5..0.5);
        if e > -0.5 {
            break e;
        }
    };
    (nu, theta, eps)
}

pub fn random_symbols<R: Rng + ?Sized>(scheme: &CpmScheme, n: usize, rng: &mut R) -> Vec<i32> {
    let m = scheme.alphabet_size() as i32;
    (0..n)
        .map(|_| 2 * rng.random_range(0..m) - (m - 1))
        .collect()
}

pub fn random_bits<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..2u8)).collect()
}

/// Wraps to `(-pi, pi]`.
pub fn wrap_phase(x: f64) -> f64 {
    Complex64::from_polar(1.0, x).arg()
}

#[cfg(test)]
mod tests;
