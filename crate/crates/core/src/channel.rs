//! Offset + AWGN channel.
//!
//! The burst is evaluated analytically at the delayed instants, so the
//! fractional delay introduces no interpolation error. Samples
//! `delta .. delta + N * Lb` carry the signal; everything else is noise only.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cpm::{ComplexBaseband, CpmScheme, PhaseTrajectory};
use crate::error::{invalid, Result};
use crate::rng::{complex_gaussian, rng_from_seed};

/// True synchronization parameters and noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Frequency offset in cycles per sample (`fd Ts / N`).
    pub nu: f64,
    /// Carrier phase in radians.
    pub theta: f64,
    /// Fractional delay in symbols, `-0.5 < eps < 0.5`.
    pub eps: f64,
    /// Noise-only samples before the burst.
    pub delta: usize,
    /// `Es/N0` in dB; `f64::INFINITY` disables the noise.
    pub esn0_db: f64,
    pub seed: u64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            nu: 0.0,
            theta: 0.0,
            eps: 0.0,
            delta: 0,
            esn0_db: f64::INFINITY,
            seed: 0,
        }
    }
}

/// Per-sample complex noise variance `N / (Es/N0)`.
pub fn noise_variance(esn0_db: f64, sps: usize) -> f64 {
    sps as f64 / 10f64.powf(esn0_db / 10.0)
}

/// Receives `symbols` through the channel as a `total_len`-sample stream.
pub fn apply_channel(
    scheme: &CpmScheme,
    symbols: &[i32],
    sps: usize,
    params: &ChannelParams,
    total_len: usize,
) -> Result<ComplexBaseband> {
    if sps == 0 {
        return invalid("samples per symbol must be >= 1");
    }
    if !(params.eps > -0.5 && params.eps < 0.5) {
        return invalid(format!(
            "fractional delay {} outside (-0.5, 0.5)",
            params.eps
        ));
    }
    let burst = sps * symbols.len();
    if total_len < params.delta + burst {
        return invalid(format!(
            "total length {total_len} shorter than delay + burst ({})",
            params.delta + burst
        ));
    }
    let traj = PhaseTrajectory::new(scheme, symbols)?;
    let mut samples = vec![Complex64::new(0.0, 0.0); total_len];
    for (n, x) in samples
        .iter_mut()
        .enumerate()
        .skip(params.delta)
        .take(burst)
    {
        let t = (n - params.delta) as f64 / sps as f64 - params.eps;
        let rot = 2.0 * PI * params.nu * n as f64 + params.theta;
        *x = Complex64::from_polar(1.0, rot + traj.phase(t));
    }
    add_noise(&mut samples, params.esn0_db, sps, params.seed);
    Ok(ComplexBaseband::new(samples, sps))
}

/// I.i.d. circular Gaussian samples of variance `N / (Es/N0)`. Uses the
/// same draw order as [`apply_channel`], so a noiseless channel output plus
/// `noise_only` with the same seed reproduces the noisy output.
pub fn noise_only(len: usize, esn0_db: f64, sps: usize, seed: u64) -> ComplexBaseband {
    let mut samples = vec![Complex64::new(0.0, 0.0); len];
    add_noise(&mut samples, esn0_db, sps, seed);
    ComplexBaseband::new(samples, sps)
}

fn add_noise(samples: &mut [Complex64], esn0_db: f64, sps: usize, seed: u64) {
    let var = noise_variance(esn0_db, sps);
    if var == 0.0 {
        return;
    }
    let mut rng = rng_from_seed(seed);
    for x in samples.iter_mut() {
        *x += complex_gaussian(&mut rng, var);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpm::{modulate, optimal_preamble};

    #[test]
    fn identity_channel() {
        let s = CpmScheme::gmsk();
        let syms = optimal_preamble(&s, 16).unwrap();
        let want = modulate(&s, &syms, 2).unwrap();
        let got = apply_channel(&s, &syms, 2, &ChannelParams::default(), want.len()).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn fractional_delay_is_analytic() {
        let s = CpmScheme::raised_cosine(2, 2, 1, 2).unwrap();
        let syms = [1, -1, -1, 1, 1, 1, -1, 1];
        let p = ChannelParams {
            eps: 0.25,
            delta: 3,
            ..Default::default()
        };
        let r = apply_channel(&s, &syms, 4, &p, 3 + 32 + 5).unwrap();
        let traj = PhaseTrajectory::new(&s, &syms).unwrap();
        for n in 0..r.len() {
            let t = (n as f64 - 3.0) / 4.0 - 0.25;
            if !(3..35).contains(&n) {
                assert_eq!(r.samples[n], Complex64::new(0.0, 0.0));
            } else {
                let err = (r.samples[n] * Complex64::from_polar(1.0, -traj.phase(t))).arg();
                assert!(err.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_short_stream_and_bad_eps() {
        let s = CpmScheme::msk();
        let p = ChannelParams {
            delta: 2,
            ..Default::default()
        };
        assert!(apply_channel(&s, &[1, 1], 2, &p, 5).is_err());
        let p = ChannelParams {
            eps: 0.5,
            ..Default::default()
        };
        assert!(apply_channel(&s, &[1, 1], 2, &p, 4).is_err());
    }

    #[test]
    fn noise_variance_and_determinism() {
        assert!((noise_variance(10.0, 2) - 0.2).abs() < 1e-15);
        let a = noise_only(1_000_000, 0.0, 2, 11);
        let p: f64 = a.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / a.len() as f64;
        assert!((p - 2.0).abs() < 0.02, "{p}");
        let b = noise_only(1_000_000, 0.0, 1, 12);
        let p: f64 = b.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / b.len() as f64;
        assert!((p - 1.0).abs() < 0.01, "{p}");
        // I and Q carry half each.
        let pi: f64 = b.samples.iter().map(|z| z.re * z.re).sum::<f64>() / b.len() as f64;
        assert!((pi - 0.5).abs() < 0.005);
        assert_eq!(noise_only(64, 3.0, 2, 5), noise_only(64, 3.0, 2, 5));
    }

    #[test]
    fn noise_is_white() {
        let len = 200_000;
        let x = noise_only(len, 0.0, 1, 3).samples;
        let p: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>() / len as f64;
        for d in 1..=8 {
            let c: Complex64 = (0..len - d).map(|n| x[n].conj() * x[n + d]).sum();
            let rho = c.norm() / (len as f64 * p);
            assert!(rho < 5.0 / (len as f64).sqrt(), "lag {d}: {rho}");
        }
    }

    #[test]
    fn channel_is_linear_in_the_signal() {
        let s = CpmScheme::gmsk();
        let syms = optimal_preamble(&s, 32).unwrap();
        let mut p = ChannelParams {
            nu: 0.013,
            theta: 2.1,
            eps: -0.31,
            delta: 17,
            esn0_db: f64::INFINITY,
            seed: 99,
        };
        let total = 17 + 2 * syms.len() + 9;
        let clean = apply_channel(&s, &syms, 2, &p, total).unwrap();
        p.esn0_db = 4.0;
        let noisy = apply_channel(&s, &syms, 2, &p, total).unwrap();
        let w = noise_only(total, 4.0, 2, 99);
        for n in 0..total {
            assert_eq!(clean.samples[n] + w.samples[n], noisy.samples[n]);
        }
    }
}
