//! Error of the piecewise-linear preamble phase model, and the partial
//! response lag.
//!
//! Over the preamble, the CPM phase is compared with the three-segment ramp
//! (`-A, +A, -A` per symbol, `A = (M-1) pi h`) after shifting the signal by
//! the lag `T_l`. `e_a` is the energy of `exp(j phi) - exp(j phi')` relative
//! to the signal energy.

use std::f64::consts::PI;

use crate::cpm::{lag_time, optimal_preamble, CpmScheme, PhaseTrajectory};
use crate::error::{invalid, Result};

/// Quadrature resolution (points per symbol) for the closed-form integrals.
const ANALYTIC_RESOLUTION: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxErrorReport {
    /// Trapezoid integral of `|1 - exp(j e)|^2` over the preamble, / L0.
    pub e_a_numeric: f64,
    /// Same with the small-angle integrand `e^2`.
    pub e_a_surrogate: f64,
    /// Closed-form value (full response) or the start + transition terms
    /// (partial response).
    pub e_a_analytic: f64,
    /// `h^2 (M-1)^2`, the normalization used to compare schemes.
    pub normalization: f64,
    /// `(t, e(t))` on the quadrature grid.
    pub e_t_profile: Vec<(f64, f64)>,
}

impl ApproxErrorReport {
    pub fn normalized_numeric(&self) -> f64 {
        self.e_a_numeric / self.normalization
    }

    pub fn normalized_analytic(&self) -> f64 {
        self.e_a_analytic / self.normalization
    }

    pub fn max_abs_error(&self) -> f64 {
        self.e_t_profile
            .iter()
            .fold(0.0, |m, &(_, e)| m.max(e.abs()))
    }
}

/// Piecewise-linear preamble phase at window time `t` (symbols).
pub fn template_phase(scheme: &CpmScheme, l0: usize, t: f64) -> f64 {
    let a = scheme.slope();
    let q = l0 as f64 / 4.0;
    if t <= q {
        -a * t
    } else if t <= 3.0 * q {
        -a * q + a * (t - q)
    } else {
        a * q - a * (t - 3.0 * q)
    }
}

/// Integrates the approximation error over `[0, L0]` on an `r`-point grid.
pub fn approx_error_numeric(scheme: &CpmScheme, l0: usize, r: usize) -> Result<ApproxErrorReport> {
    if r < 256 {
        return invalid(format!("quadrature resolution {r} < 256"));
    }
    let syms = optimal_preamble(scheme, l0)?;
    let traj = PhaseTrajectory::new(scheme, &syms)?;
    let tl = lag_time(scheme);
    let n = l0 * r;
    let dt = 1.0 / r as f64;
    let mut profile = Vec::with_capacity(n + 1);
    let (mut exact, mut small) = (0.0, 0.0);
    for i in 0..=n {
        let t = i as f64 * dt;
        let e = traj.phase(t + tl) - template_phase(scheme, l0, t);
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        exact += w * (2.0 - 2.0 * e.cos());
        small += w * e * e;
        profile.push((t, e));
    }
    let l0f = l0 as f64;
    Ok(ApproxErrorReport {
        e_a_numeric: exact * dt / l0f,
        e_a_surrogate: small * dt / l0f,
        e_a_analytic: approx_error_analytic(scheme, l0)?,
        normalization: normalization(scheme),
        e_t_profile: profile,
    })
}

pub fn normalization(scheme: &CpmScheme) -> f64 {
    let m1 = f64::from(scheme.max_symbol());
    scheme.h() * scheme.h() * m1 * m1
}

/// Small-angle approximation error from the per-interval integrals: one
/// symbol of `q(t) - t/2` for full response; the start-up term and the two
/// preamble transitions for partial response (steady-state intervals
/// contribute nothing).
pub fn approx_error_analytic(scheme: &CpmScheme, l0: usize) -> Result<f64> {
    if l0 == 0 || l0 % 4 != 0 {
        return invalid(format!("L0 = {l0} is not a positive multiple of 4"));
    }
    let l = scheme.pulse_len();
    let q = |t: f64| scheme.pulse().q(t);
    let c = 2.0 * PI * scheme.h() * f64::from(scheme.max_symbol());
    if l == 1 {
        let i = simpson(|t| (q(t) - t / 2.0).powi(2), 0.0, 1.0, ANALYTIC_RESOLUTION);
        return Ok(c * c * i);
    }
    let half = (l as f64 - 1.0) / 2.0;
    let e1 = |t: f64| c * (t / 2.0 - (0..l - 1).map(|i| q(t + half - i as f64)).sum::<f64>());
    let phi2 = |t: f64| {
        c * ((l..=2 * (l - 1))
            .map(|i| q(t + l as f64 - i as f64))
            .sum::<f64>()
            - (1..l).map(|i| q(t + l as f64 - i as f64)).sum::<f64>())
    };
    let e2 = |t: f64| phi2(t) + c / 2.0 * t + c / 2.0 * half;
    let n = ANALYTIC_RESOLUTION * l;
    let i1 = simpson(|t| e1(t).powi(2), 0.0, half, n);
    let i2 = simpson(|t| e2(t).powi(2), 0.0, half, n);
    Ok((i1 + 4.0 * i2) / l0 as f64)
}

/// `e_2(t)` over the whole transition interval `[0, L-1]`, for checking its
/// symmetry about the midpoint.
pub fn transition_error(scheme: &CpmScheme, t: f64) -> f64 {
    let l = scheme.pulse_len();
    let q = |t: f64| scheme.pulse().q(t);
    let c = 2.0 * PI * scheme.h() * f64::from(scheme.max_symbol());
    let half = (l as f64 - 1.0) / 2.0;
    let phi2 = c
        * ((l..=2 * (l - 1))
            .map(|i| q(t + l as f64 - i as f64))
            .sum::<f64>()
            - (1..l).map(|i| q(t + l as f64 - i as f64)).sum::<f64>());
    // Template: down-ramp until the midpoint, up-ramp after.
    let tpl = if t <= half {
        -c / 2.0 * (half + t)
    } else {
        -c / 2.0 * (half + half) + c / 2.0 * (t - half)
    };
    phi2 - tpl
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Lag of the partial-response phase behind the 1REC ramp, fitted by least
/// squares over the symbol boundaries `K = L+1 ..= L+16` of a run of
/// `+(M-1)` symbols.
pub fn measure_lag(scheme: &CpmScheme) -> Result<f64> {
    let l = scheme.pulse_len();
    let syms = vec![scheme.max_symbol(); l + 17];
    let traj = PhaseTrajectory::new(scheme, &syms)?;
    let a = scheme.slope();
    let ks = l + 1..=l + 16;
    let n = ks.clone().count() as f64;
    Ok(ks.map(|k| k as f64 - traj.phase(k as f64) / a).sum::<f64>() / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rc(l: usize) -> CpmScheme {
        CpmScheme::raised_cosine(l, 2, 1, 2).unwrap()
    }

    #[test]
    fn full_response_values() {
        let msk = approx_error_numeric(&CpmScheme::msk(), 32, 256).unwrap();
        assert!(msk.e_a_numeric.abs() < 1e-12 && msk.e_a_analytic.abs() < 1e-12);
        let r = approx_error_numeric(&rc(1), 32, 256).unwrap();
        // (1/(4 pi))^2 / 2 * 4 pi^2 = 1/8 after normalization.
        assert!((r.normalized_analytic() - 0.125).abs() < 1e-6);
        assert!((r.e_a_surrogate / r.normalization - 0.125).abs() < 1e-4);
        assert!((r.normalized_numeric() - 0.125).abs() < 1e-3);
        let r64 = approx_error_analytic(&rc(1), 64).unwrap();
        assert!((r64 - r.e_a_analytic).abs() < 1e-15);
    }

    #[test]
    fn partial_response_scales_as_one_over_l0() {
        for s in [rc(2), rc(3), CpmScheme::gmsk()] {
            let e: Vec<f64> = [16, 32, 64]
                .iter()
                .map(|&l0| approx_error_numeric(&s, l0, 256).unwrap().e_a_numeric * l0 as f64)
                .collect();
            for v in &e {
                assert!((v / e[2] - 1.0).abs() < 0.05, "{s}: {e:?}");
            }
        }
    }

    #[test]
    fn numeric_matches_analytic() {
        for s in [
            rc(1),
            rc(2),
            rc(3),
            CpmScheme::rect(2, 2, 1, 2).unwrap(),
            CpmScheme::rect(3, 2, 1, 2).unwrap(),
            CpmScheme::gmsk(),
        ] {
            let r = approx_error_numeric(&s, 64, 256).unwrap();
            // The closed form is a small-angle result; it tracks the e^2
            // integral everywhere, the exact integrand while max |e| stays
            // well below 1 rad.
            let rel = (r.e_a_surrogate / r.e_a_analytic - 1.0).abs();
            assert!(rel < 0.02, "{s}: {} vs {}", r.e_a_surrogate, r.e_a_analytic);
            let rel = (r.e_a_numeric / r.e_a_analytic - 1.0).abs();
            if r.max_abs_error() < 0.7 {
                assert!(rel < 0.02, "{s}: {} vs {}", r.e_a_numeric, r.e_a_analytic);
            } else {
                // 1 - cos deficit: at most e^2/12 relative.
                let bound = r.max_abs_error().powi(2) / 12.0;
                assert!(rel < bound, "{s}: {rel} vs {bound}");
            }
        }
        assert!(
            approx_error_numeric(&rc(3), 64, 256).unwrap().e_a_numeric
                > approx_error_numeric(&rc(2), 64, 256).unwrap().e_a_numeric
        );
    }

    #[test]
    fn normalized_error_is_independent_of_index() {
        let base = approx_error_numeric(&rc(2), 64, 256).unwrap();
        for (m, k, p) in [(2, 1, 4), (4, 1, 4), (4, 1, 8), (2, 1, 8)] {
            let s = CpmScheme::raised_cosine(2, m, k, p).unwrap();
            let r = approx_error_numeric(&s, 64, 256).unwrap();
            let a = r.e_a_surrogate / r.normalization;
            assert!((a / (base.e_a_surrogate / base.normalization) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn small_angle_surrogate() {
        for s in [
            rc(1),
            rc(2),
            rc(3),
            CpmScheme::gmsk(),
            CpmScheme::raised_cosine(2, 4, 1, 4).unwrap(),
        ] {
            let r = approx_error_numeric(&s, 64, 256).unwrap();
            if r.max_abs_error() < 0.3 {
                assert!((r.e_a_numeric / r.e_a_surrogate - 1.0).abs() < 0.05);
            }
            // Steady-state symbols carry no error.
            let mid = r.e_t_profile[16 * 256 + 128 + 8 * 256].1;
            if s.pulse_len() > 1 {
                assert!(mid.abs() < 1e-3, "{s}: {mid}");
            }
        }
    }

    #[test]
    fn transition_error_is_symmetric() {
        for s in [rc(2), rc(3), CpmScheme::gmsk()] {
            let l = s.pulse_len() as f64 - 1.0;
            for i in 0..50 {
                let t = l / 2.0 * i as f64 / 50.0;
                let (a, b) = (transition_error(&s, t), transition_error(&s, l - t));
                assert!((a.abs() - b.abs()).abs() < 1e-4, "{s} t={t}: {a} {b}");
            }
        }
    }

    #[test]
    fn lag_fit() {
        assert!(measure_lag(&CpmScheme::msk()).unwrap().abs() < 1e-12);
        assert!((measure_lag(&rc(2)).unwrap() - 0.5).abs() < 1e-9);
        assert!((measure_lag(&rc(3)).unwrap() - 1.0).abs() < 1e-9);
        assert!((measure_lag(&CpmScheme::rect(2, 2, 1, 2).unwrap()).unwrap() - 0.5).abs() < 1e-9);
        assert!((measure_lag(&CpmScheme::gmsk()).unwrap() - 1.5).abs() < 1e-3);
    }
}
