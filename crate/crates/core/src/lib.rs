//! Burst-mode CPM synchronization simulator.
//!
//! The crate is organised along the receive chain:
//!
//! - [`cpm`]: schemes, phase pulses, the modulator, the synchronization
//!   preamble and the signal autocorrelation.
//! - [`channel`]: frequency/phase/delay offsets plus complex AWGN.
//! - [`estimator`]: the feedforward data-aided frequency, timing and phase
//!   estimator, and an exact log-likelihood oracle.
//! - [`framesync`]: start-of-signal detection and estimation.
//! - [`demod`]: CPM trellis, Viterbi demodulation, phase tracking and
//!   unique-word alignment.
//! - [`analysis`]: phase-approximation error and lag-time measurements.
//! - [`harness`]: Monte Carlo experiment drivers and CSV output.

pub mod analysis;
pub mod channel;
pub mod cpm;
pub mod demod;
pub mod error;
pub mod estimator;
pub mod framesync;
pub mod harness;
pub mod rng;

pub use error::{Error, Result};
pub use num_complex::Complex64;
