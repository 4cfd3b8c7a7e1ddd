//! Continuous phase modulation: schemes, pulses, modulator, preamble.

mod autocorr;
mod modulator;
mod preamble;
mod pulse;
mod scheme;

pub use autocorr::signal_autocorrelation;
pub use modulator::{modulate, ComplexBaseband, PhaseTrajectory};
pub use preamble::{lag_samples, lag_time, optimal_preamble, preamble_tail_len};
pub use pulse::{PhasePulse, PulseShape, DEFAULT_RESOLUTION, MIN_RESOLUTION};
pub use scheme::{CpmScheme, ModIndex, SymbolSequence};
