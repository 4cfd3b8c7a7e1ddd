//! Phase accumulation and complex-envelope generation.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::scheme::CpmScheme;
use crate::error::{invalid, Result};

/// Uniformly sampled complex envelope, `sps` samples per symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexBaseband {
    pub samples: Vec<Complex64>,
    pub sps: usize,
}

impl ComplexBaseband {
    pub fn new(samples: Vec<Complex64>, sps: usize) -> Self {
        Self { samples, sps }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Continuous phase `phi(t)` of a finite symbol sequence, evaluable at any
/// real `t` (in symbols). Symbols older than `L` periods contribute through
/// a running prefix sum, so each evaluation costs `O(L)`.
#[derive(Debug, Clone)]
pub struct PhaseTrajectory<'a> {
    scheme: &'a CpmScheme,
    symbols: Vec<i32>,
    prefix: Vec<i64>,
}

impl<'a> PhaseTrajectory<'a> {
    pub fn new(scheme: &'a CpmScheme, symbols: &[i32]) -> Result<Self> {
        scheme.check_symbols(symbols)?;
        let mut prefix = Vec::with_capacity(symbols.len() + 1);
        prefix.push(0i64);
        for &s in symbols {
            prefix.push(prefix.last().unwrap() + i64::from(s));
        }
        Ok(Self {
            scheme,
            symbols: symbols.to_vec(),
            prefix,
        })
    }

    pub fn symbols(&self) -> &[i32] {
        &self.symbols
    }

    /// Sum of the first `k` symbols (clamped to the sequence length).
    pub fn symbol_sum(&self, k: usize) -> i64 {
        self.prefix[k.min(self.symbols.len())]
    }

    /// `phi(t)` in radians; zero for `t <= 0`.
    pub fn phase(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let l = self.scheme.pulse_len() as i64;
        let n = self.symbols.len() as i64;
        let k = t.floor() as i64;
        // Symbols i <= k - L have q(t - i) = 1/2.
        let settled = (k - l + 1).clamp(0, n);
        let mut acc = 0.5 * self.prefix[settled as usize] as f64;
        let pulse = self.scheme.pulse();
        for i in settled..(k + 1).min(n) {
            acc += f64::from(self.symbols[i as usize]) * pulse.q(t - i as f64);
        }
        2.0 * PI * self.scheme.h() * acc
    }

    /// `exp(j phi(t))`.
    pub fn envelope(&self, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.phase(t))
    }
}

/// Modulates `symbols` at `sps` samples per symbol: sample `n` is
/// `exp(j phi(n / sps))`, `n = 0 .. sps * len`.
pub fn modulate(scheme: &CpmScheme, symbols: &[i32], sps: usize) -> Result<ComplexBaseband> {
    if sps == 0 {
        return invalid("samples per symbol must be >= 1");
    }
    if symbols.is_empty() {
        return invalid("empty symbol sequence");
    }
    let traj = PhaseTrajectory::new(scheme, symbols)?;
    let samples = (0..sps * symbols.len())
        .map(|n| traj.envelope(n as f64 / sps as f64))
        .collect();
    Ok(ComplexBaseband::new(samples, sps))
}
