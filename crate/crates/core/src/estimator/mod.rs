//! Feedforward data-aided joint frequency / timing / phase estimator.
//!
//! Over the preamble the CPM phase is close to a piecewise-linear ramp with
//! slopes `-A, +A, -A` per symbol (`A = (M-1) pi h`). Rotating the first and
//! last quarters by `exp(+jAn/N)` and the middle half by `exp(-jAn/N)` turns
//! the log-likelihood into `|lambda1(nu)| + |lambda2(nu)|`, a one-dimensional
//! search done with one pair of zero-padded FFTs. Timing and phase then
//! follow in closed form from `lambda1`, `lambda2` at the frequency estimate.
//!
//! The window handed to the estimator starts `N_l` samples after the start
//! of the burst (see [`crate::cpm::lag_samples`]) and is `N * L0` long.

mod oracle;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::cpm::CpmScheme;
use crate::error::{invalid, Error, Result};

pub use oracle::{exact_llf, oracle_search, preamble_template, OracleEstimate};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    /// Samples per symbol `N`.
    pub sps: usize,
    /// Preamble length `L0` in symbols (multiple of 4).
    pub l0: usize,
    /// Zero-padding factor (power of two).
    pub kf: usize,
    /// Gaussian interpolation between FFT bins.
    pub interpolate: bool,
    /// Golden-section polish of the frequency peak after interpolation.
    /// Off by default; only used for diagnostics.
    pub refine: bool,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            sps: 2,
            l0: 64,
            kf: 2,
            interpolate: true,
            refine: false,
        }
    }
}

impl EstimatorConfig {
    pub fn window_len(&self) -> usize {
        self.sps * self.l0
    }

    /// FFT size `Kf * nextpow2(N L0)`.
    pub fn fft_len(&self) -> usize {
        self.kf * self.window_len().next_power_of_two()
    }

    fn validate(&self) -> Result<()> {
        if self.sps == 0 {
            return invalid("samples per symbol must be >= 1");
        }
        if self.l0 == 0 || self.l0 % 4 != 0 {
            return invalid(format!("L0 = {} is not a positive multiple of 4", self.l0));
        }
        if self.kf == 0 || !self.kf.is_power_of_two() {
            return invalid(format!("Kf = {} is not a power of two", self.kf));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyncEstimate {
    /// Frequency offset, cycles per sample, in `[-0.5, 0.5)`.
    pub nu_hat: f64,
    /// Fractional timing, symbols.
    pub eps_hat: f64,
    /// Carrier phase at the first window sample, in `(-pi, pi]`.
    pub theta_hat: f64,
    /// Coarse FFT argmax.
    pub peak_bin: usize,
    /// `X` at the coarse peak.
    pub metric_peak: f64,
    /// `|eps_hat| >= 0.5`: outside the physical delay range (not clipped).
    pub eps_out_of_range: bool,
}

impl SyncEstimate {
    /// Frequency offset normalized to the symbol rate, `fd Ts`.
    pub fn fd_ts(&self, sps: usize) -> f64 {
        self.nu_hat * sps as f64
    }
}

/// Splits the window into the quarter signal `r1` (quarters 1 and 4, the
/// latter de-rotated by `exp(-jA L0)`) and the half signal `r2` (middle half
/// rotated by `exp(jA L0 / 2)`).
pub fn build_r1_r2(
    window: &[Complex64],
    scheme: &CpmScheme,
    cfg: &EstimatorConfig,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    cfg.validate()?;
    let n = cfg.window_len();
    if window.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: window.len(),
        });
    }
    let a = scheme.slope();
    let l0 = cfg.l0 as f64;
    let q = n / 4;
    let zero = Complex64::new(0.0, 0.0);
    let c4 = Complex64::from_polar(1.0, -a * l0);
    let c2 = Complex64::from_polar(1.0, a * l0 / 2.0);
    let mut r1 = vec![zero; n];
    let mut r2 = vec![zero; n];
    r1[..q].copy_from_slice(&window[..q]);
    for i in 3 * q..n {
        r1[i] = window[i] * c4;
    }
    for i in q..3 * q {
        r2[i] = window[i] * c2;
    }
    Ok((r1, r2))
}

/// Reusable estimator: owns the FFT plan and the slope rotations.
#[derive(Clone)]
pub struct Estimator {
    scheme: CpmScheme,
    cfg: EstimatorConfig,
    fft: Arc<dyn Fft<f64>>,
    up: Vec<Complex64>,
}

impl std::fmt::Debug for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Estimator")
            .field("scheme", &self.scheme.label())
            .field("cfg", &self.cfg)
            .finish()
    }
}

impl Estimator {
    pub fn new(scheme: &CpmScheme, cfg: EstimatorConfig) -> Result<Self> {
        cfg.validate()?;
        let fft = FftPlanner::new().plan_fft_forward(cfg.fft_len());
        let a = scheme.slope() / cfg.sps as f64;
        let up = (0..cfg.window_len())
            .map(|n| Complex64::from_polar(1.0, a * n as f64))
            .collect();
        Ok(Self {
            scheme: scheme.clone(),
            cfg,
            fft,
            up,
        })
    }

    pub fn config(&self) -> &EstimatorConfig {
        &self.cfg
    }

    pub fn scheme(&self) -> &CpmScheme {
        &self.scheme
    }

    /// `(lambda1[k], lambda2[k])` for `k = 0 .. fft_len`.
    pub fn spectral_metrics(
        &self,
        r1: &[Complex64],
        r2: &[Complex64],
    ) -> (Vec<Complex64>, Vec<Complex64>) {
        let nf = self.cfg.fft_len();
        let zero = Complex64::new(0.0, 0.0);
        let mut l1 = vec![zero; nf];
        let mut l2 = vec![zero; nf];
        for (i, u) in self.up.iter().enumerate() {
            l1[i] = r1[i] * u;
            l2[i] = r2[i] * u.conj();
        }
        self.fft.process(&mut l1);
        self.fft.process(&mut l2);
        (l1, l2)
    }

    /// `lambda1(nu)`, `lambda2(nu)` by direct summation at an arbitrary
    /// frequency.
    pub fn lambdas_at(
        &self,
        r1: &[Complex64],
        r2: &[Complex64],
        nu: f64,
    ) -> (Complex64, Complex64) {
        let mut l1 = Complex64::new(0.0, 0.0);
        let mut l2 = Complex64::new(0.0, 0.0);
        let w = Complex64::from_polar(1.0, -2.0 * PI * nu);
        let mut e = Complex64::new(1.0, 0.0);
        for (i, u) in self.up.iter().enumerate() {
            // Re-seed the recursion periodically to bound rounding drift.
            if i % 64 == 0 {
                e = Complex64::from_polar(1.0, -2.0 * PI * nu * i as f64);
            }
            let eu = e * u;
            l1 += r1[i] * eu;
            l2 += r2[i] * e * u.conj();
            e *= w;
        }
        (l1, l2)
    }

    pub fn estimate(&self, window: &[Complex64]) -> Result<SyncEstimate> {
        let (r1, r2) = build_r1_r2(window, &self.scheme, &self.cfg)?;
        let (l1, l2) = self.spectral_metrics(&r1, &r2);
        let x: Vec<f64> = l1
            .iter()
            .zip(&l2)
            .map(|(a, b)| a.norm() + b.norm())
            .collect();
        let (peak_bin, &metric_peak) =
            x.iter().enumerate().fold(
                (0, &x[0]),
                |best, (k, v)| if *v > *best.1 { (k, v) } else { best },
            );
        if metric_peak <= 0.0 || !metric_peak.is_finite() {
            return Err(Error::DegenerateSpectrum);
        }
        let nf = x.len();
        let mut bin = peak_bin as f64;
        if self.cfg.interpolate {
            bin += gaussian_interpolation(
                x[(peak_bin + nf - 1) % nf],
                x[peak_bin],
                x[(peak_bin + 1) % nf],
            );
        }
        let mut nu = wrap_frequency(bin / nf as f64);
        if self.cfg.refine {
            nu = self.polish(&r1, &r2, nu, 1.0 / nf as f64);
        }
        let (lam1, lam2) = self.lambdas_at(&r1, &r2, nu);
        let a = self.scheme.slope();
        let eps_hat = (lam1 * lam2.conj()).arg() / (2.0 * a);
        let theta_hat = (Complex64::from_polar(1.0, -a * eps_hat) * lam1
            + Complex64::from_polar(1.0, a * eps_hat) * lam2)
            .arg();
        Ok(SyncEstimate {
            nu_hat: nu,
            eps_hat,
            theta_hat,
            peak_bin,
            metric_peak,
            eps_out_of_range: eps_hat.abs() >= 0.5,
        })
    }

    // Golden-section maximization of X(nu) on [nu - span, nu + span].
    fn polish(&self, r1: &[Complex64], r2: &[Complex64], nu: f64, span: f64) -> f64 {
        let f = |v: f64| {
            let (a, b) = self.lambdas_at(r1, r2, v);
            a.norm() + b.norm()
        };
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let (mut lo, mut hi) = (nu - span, nu + span);
        let mut c = hi - g * (hi - lo);
        let mut d = lo + g * (hi - lo);
        let (mut fc, mut fd) = (f(c), f(d));
        while hi - lo > 1e-9 * span {
            if fc > fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - g * (hi - lo);
                fc = f(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + g * (hi - lo);
                fd = f(d);
            }
        }
        wrap_frequency(0.5 * (lo + hi))
    }
}

/// Offset (in bins) of the Gaussian-interpolated peak from the centre bin.
/// Falls back to zero when a neighbour is not positive or the three points
/// are not strictly concave in the log domain.
pub fn gaussian_interpolation(left: f64, centre: f64, right: f64) -> f64 {
    if left <= 0.0 || centre <= 0.0 || right <= 0.0 {
        return 0.0;
    }
    let (a, b, c) = (left.ln(), centre.ln(), right.ln());
    let den = a + c - 2.0 * b;
    if den >= 0.0 || !den.is_finite() {
        return 0.0;
    }
    0.5 * (a - c) / den
}

/// Maps a frequency in cycles per sample into `[-0.5, 0.5)`.
pub fn wrap_frequency(nu: f64) -> f64 {
    let w = nu - nu.floor();
    if w >= 0.5 {
        w - 1.0
    } else {
        w
    }
}

/// One-shot convenience wrapper around [`Estimator::spectral_metrics`].
pub fn spectral_metrics(
    r1: &[Complex64],
    r2: &[Complex64],
    scheme: &CpmScheme,
    cfg: &EstimatorConfig,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let n = cfg.window_len();
    for r in [r1, r2] {
        if r.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: r.len(),
            });
        }
    }
    Ok(Estimator::new(scheme, *cfg)?.spectral_metrics(r1, r2))
}

/// One-shot convenience wrapper around [`Estimator::estimate`].
pub fn estimate(
    window: &[Complex64],
    scheme: &CpmScheme,
    cfg: &EstimatorConfig,
) -> Result<SyncEstimate> {
    Estimator::new(scheme, *cfg)?.estimate(window)
}
