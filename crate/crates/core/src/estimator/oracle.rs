//! Exact log-likelihood and a brute-force grid maximizer, used as the
//! reference the fast estimator is tested against.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{wrap_frequency, EstimatorConfig};
use crate::cpm::{lag_time, optimal_preamble, CpmScheme, PhaseTrajectory};
use crate::error::{Error, Result};

/// Fine-grid steps of the oracle: `nu` in units of `1e-4 / N`, `eps` in symbols.
pub const ORACLE_NU_STEP_FD: f64 = 1e-4;
pub const ORACLE_EPS_STEP: f64 = 1e-3;
const COARSE_EPS_STEP: f64 = 0.01;
const COARSE_PAD: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub nu: f64,
    pub eps: f64,
    pub theta: f64,
    pub llf: f64,
}

/// Noiseless preamble (including tail) as seen through the estimator window
/// with fractional delay `eps`: sample `n` is `s(T_l + n / N - eps)`.
pub fn preamble_template(
    scheme: &CpmScheme,
    cfg: &EstimatorConfig,
    eps: f64,
) -> Result<Vec<Complex64>> {
    let syms = optimal_preamble(scheme, cfg.l0)?;
    let traj = PhaseTrajectory::new(scheme, &syms)?;
    let tl = lag_time(scheme);
    Ok((0..cfg.window_len())
        .map(|n| traj.envelope(tl + n as f64 / cfg.sps as f64 - eps))
        .collect())
}

/// `Re sum_n exp(-j(2 pi nu n + theta)) r[n] conj(s_eps[n])` with the true
/// CPM phase in `s_eps`.
pub fn exact_llf(
    window: &[Complex64],
    scheme: &CpmScheme,
    cfg: &EstimatorConfig,
    nu: f64,
    theta: f64,
    eps: f64,
) -> Result<f64> {
    check_len(window, cfg)?;
    let s = preamble_template(scheme, cfg, eps)?;
    let z = correlate(window, &s, nu);
    Ok((z * Complex64::from_polar(1.0, -theta)).re)
}

fn check_len(window: &[Complex64], cfg: &EstimatorConfig) -> Result<()> {
    if window.len() != cfg.window_len() {
        return Err(Error::LengthMismatch {
            expected: cfg.window_len(),
            actual: window.len(),
        });
    }
    Ok(())
}

fn correlate(r: &[Complex64], s: &[Complex64], nu: f64) -> Complex64 {
    r.iter()
        .zip(s)
        .enumerate()
        .map(|(n, (r, s))| r * s.conj() * Complex64::from_polar(1.0, -2.0 * PI * nu * n as f64))
        .sum()
}

/// Maximizes the exact LLF: a coarse stage (eps step 0.01, zero-padded FFT
/// over nu) followed by a local grid with nu step `1e-4 / N` and eps step
/// `1e-3`, re-centred while the maximum sits on the grid boundary. The phase
/// is maximized in closed form.
pub fn oracle_search(
    window: &[Complex64],
    scheme: &CpmScheme,
    cfg: &EstimatorConfig,
) -> Result<OracleEstimate> {
    check_len(window, cfg)?;
    let n = cfg.window_len();
    let nfft = COARSE_PAD * n.next_power_of_two();
    let fft = FftPlanner::new().plan_fft_forward(nfft);

    let eps_max = 0.5 - ORACLE_EPS_STEP;
    let steps = (0.5 / COARSE_EPS_STEP).round() as i64;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    let mut buf = vec![Complex64::new(0.0, 0.0); nfft];
    for i in -steps + 1..steps {
        let eps = i as f64 * COARSE_EPS_STEP;
        let s = preamble_template(scheme, cfg, eps)?;
        buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
        for k in 0..n {
            buf[k] = window[k] * s[k].conj();
        }
        fft.process(&mut buf);
        for (k, z) in buf.iter().enumerate() {
            if z.norm() > best.0 {
                best = (z.norm(), k as f64 / nfft as f64, eps);
            }
        }
    }

    let dnu = ORACLE_NU_STEP_FD / cfg.sps as f64;
    let knu = (1.0 / (nfft as f64 * dnu)).ceil() as i64;
    let keps = (COARSE_EPS_STEP / ORACLE_EPS_STEP).round() as i64;
    let (mut nu_c, mut eps_c) = (best.1, best.2);
    let mut out = OracleEstimate {
        nu: nu_c,
        eps: eps_c,
        theta: 0.0,
        llf: f64::NEG_INFINITY,
    };
    for _ in 0..32 {
        let mut top = (f64::NEG_INFINITY, 0i64, 0i64, Complex64::new(0.0, 0.0));
        for j in -keps..=keps {
            let eps = (eps_c + j as f64 * ORACLE_EPS_STEP).clamp(-eps_max, eps_max);
            let s = preamble_template(scheme, cfg, eps)?;
            let y: Vec<Complex64> = window.iter().zip(&s).map(|(r, s)| r * s.conj()).collect();
            for i in -knu..=knu {
                let nu = nu_c + i as f64 * dnu;
                let z = dft_at(&y, nu);
                if z.norm() > top.0 {
                    top = (z.norm(), i, j, z);
                }
            }
        }
        nu_c += top.1 as f64 * dnu;
        eps_c = (eps_c + top.2 as f64 * ORACLE_EPS_STEP).clamp(-eps_max, eps_max);
        out = OracleEstimate {
            nu: wrap_frequency(nu_c),
            eps: eps_c,
            theta: top.3.arg(),
            llf: top.0,
        };
        let on_edge = top.1.abs() == knu || (top.2.abs() == keps && eps_c.abs() < eps_max);
        if !on_edge {
            break;
        }
    }
    Ok(out)
}

fn dft_at(y: &[Complex64], nu: f64) -> Complex64 {
    let w = Complex64::from_polar(1.0, -2.0 * PI * nu);
    let mut e = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, v) in y.iter().enumerate() {
        if i % 64 == 0 {
            e = Complex64::from_polar(1.0, -2.0 * PI * nu * i as f64);
        }
        acc += v * e;
        e *= w;
    }
    acc
}
