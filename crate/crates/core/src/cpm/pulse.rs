//! Frequency pulses and their tabulated phase response.
//!
//! Time is measured in symbol periods throughout (Ts = 1). The phase response
//! `q(t)` is tabulated on `R` points per symbol together with the frequency
//! pulse `g(t) = q'(t)`, and evaluated between grid points by cubic Hermite
//! interpolation.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use crate::error::{invalid, Error, Result};

pub const DEFAULT_RESOLUTION: usize = 128;
pub const MIN_RESOLUTION: usize = 64;

/// Largest accepted renormalization of a truncated Gaussian pulse.
const MAX_GAUSSIAN_CORRECTION: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseShape {
    /// LREC: rectangular frequency pulse.
    Rect,
    /// LRC: raised-cosine frequency pulse.
    RaisedCosine,
    /// GMSK-style Gaussian-filtered rectangle with bandwidth-time product `bt`.
    Gaussian { bt: f64 },
}

impl PulseShape {
    /// Builds a shape from its config name (`LREC`, `LRC`, `GAUSSIAN`).
    pub fn from_kind(kind: &str, bt: Option<f64>) -> Result<Self> {
        let shape = match kind.to_ascii_uppercase().as_str() {
            "LREC" | "REC" => PulseShape::Rect,
            "LRC" | "RC" => PulseShape::RaisedCosine,
            "GAUSSIAN" | "GMSK" => match bt {
                Some(bt) => PulseShape::Gaussian { bt },
                None => return invalid("GAUSSIAN pulse requires bt"),
            },
            other => return invalid(format!("unsupported pulse kind '{other}'")),
        };
        if bt.is_some() && !matches!(shape, PulseShape::Gaussian { .. }) {
            return invalid("bt is only meaningful for the GAUSSIAN pulse");
        }
        Ok(shape)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            PulseShape::Rect => "LREC",
            PulseShape::RaisedCosine => "LRC",
            PulseShape::Gaussian { .. } => "GAUSSIAN",
        }
    }
}

impl fmt::Display for PulseShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PulseShape::Rect => write!(f, "REC"),
            PulseShape::RaisedCosine => write!(f, "RC"),
            PulseShape::Gaussian { bt } => write!(f, "GAUSS(BT={bt})"),
        }
    }
}

/// Tabulated phase response `q(t)` on `[0, L]`.
#[derive(Debug, Clone)]
pub struct PhasePulse {
    shape: PulseShape,
    length: usize,
    resolution: usize,
    q: Vec<f64>,
    g: Vec<f64>,
    correction: f64,
}

fn gauss_tail(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Antiderivative of `gauss_tail`.
fn gauss_tail_integral(u: f64) -> f64 {
    u * gauss_tail(u) - (-0.5 * u * u).exp() / (2.0 * PI).sqrt()
}

impl PhasePulse {
    pub fn new(shape: PulseShape, length: usize, resolution: usize) -> Result<Self> {
        if length == 0 {
            return invalid("pulse length L must be at least 1");
        }
        if resolution < MIN_RESOLUTION {
            return invalid(format!(
                "table resolution {resolution} below minimum {MIN_RESOLUTION}"
            ));
        }
        let len = length as f64;
        let points = length * resolution + 1;
        let grid = (0..points).map(|i| i as f64 / resolution as f64);

        let (q, g, correction): (Vec<f64>, Vec<f64>, f64) = match shape {
            PulseShape::Rect => (
                grid.clone().map(|t| t / (2.0 * len)).collect(),
                vec![1.0 / (2.0 * len); points],
                0.0,
            ),
            PulseShape::RaisedCosine => (
                grid.clone()
                    .map(|t| t / (2.0 * len) - (2.0 * PI * t / len).sin() / (4.0 * PI))
                    .collect(),
                grid.map(|t| (1.0 - (2.0 * PI * t / len).cos()) / (2.0 * len))
                    .collect(),
                0.0,
            ),
            PulseShape::Gaussian { bt } => {
                if !(bt > 0.0 && bt.is_finite()) {
                    return invalid(format!("Gaussian bt must be positive, got {bt}"));
                }
                let c = 2.0 * PI * bt / std::f64::consts::LN_2.sqrt();
                let late = len / 2.0 + 0.5;
                let early = len / 2.0 - 0.5;
                let raw_q = |t: f64| {
                    0.5 * ((gauss_tail_integral(c * (t - late))
                        - gauss_tail_integral(c * (t - early)))
                        / c
                        + 1.0)
                };
                let raw_g =
                    |t: f64| 0.5 * (gauss_tail(c * (t - late)) - gauss_tail(c * (t - early)));
                let q0 = raw_q(0.0);
                let mass = 2.0 * (raw_q(len) - q0);
                let correction = (1.0 - mass).abs();
                if correction > MAX_GAUSSIAN_CORRECTION {
                    return Err(Error::InvalidParameter(format!(
                        "L={length} too short for BT={bt}: truncation correction {correction:.3e}"
                    )));
                }
                let q = grid.clone().map(|t| (raw_q(t) - q0) / mass).collect();
                let g = grid.map(|t| raw_g(t) / mass).collect();
                (q, g, correction)
            }
        };
        let mut q = q;
        // pin the end points so q(0) = 0 and q(L) = 1/2 hold exactly
        q[0] = 0.0;
        *q.last_mut().unwrap() = 0.5;
        Ok(Self {
            shape,
            length,
            resolution,
            q,
            g,
            correction,
        })
    }

    pub fn shape(&self) -> PulseShape {
        self.shape
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Tabulated `q` at `t = i / R`, `i = 0..=L*R`.
    pub fn table(&self) -> &[f64] {
        &self.q
    }

    /// Relative mass removed by truncating the pulse to `[0, L]` (Gaussian only).
    pub fn truncation_correction(&self) -> f64 {
        self.correction
    }

    /// Phase response at `t` symbols.
    pub fn q(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= self.length as f64 {
            return 0.5;
        }
        let x = t * self.resolution as f64;
        let i = (x as usize).min(self.q.len() - 2);
        let u = x - i as f64;
        let dt = 1.0 / self.resolution as f64;
        let (u2, u3) = (u * u, u * u * u);
        self.q[i] * (2.0 * u3 - 3.0 * u2 + 1.0)
            + self.g[i] * dt * (u3 - 2.0 * u2 + u)
            + self.q[i + 1] * (3.0 * u2 - 2.0 * u3)
            + self.g[i + 1] * dt * (u3 - u2)
    }

    /// Frequency pulse at `t` symbols (linear interpolation of the table).
    pub fn g(&self, t: f64) -> f64 {
        if t < 0.0 || t > self.length as f64 {
            return 0.0;
        }
        let x = t * self.resolution as f64;
        let i = (x as usize).min(self.g.len() - 2);
        let u = x - i as f64;
        self.g[i] * (1.0 - u) + self.g[i + 1] * u
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pulse(shape: PulseShape, l: usize) -> PhasePulse {
        PhasePulse::new(shape, l, DEFAULT_RESOLUTION).unwrap()
    }

    #[test]
    fn rect_and_rc_midpoint_quarter() {
        assert!((pulse(PulseShape::Rect, 1).q(0.5) - 0.25).abs() < 1e-15);
        assert!((pulse(PulseShape::RaisedCosine, 1).q(0.5) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn gaussian_normalized_at_end() {
        let p = pulse(PulseShape::Gaussian { bt: 0.3 }, 4);
        assert!((p.q(4.0) - 0.5).abs() < 1e-9);
        assert!((p.table()[4 * DEFAULT_RESOLUTION] - 0.5).abs() < 1e-9);
        assert!(p.truncation_correction() < 1e-2);
    }

    #[test]
    fn gaussian_too_short_rejected() {
        let err = PhasePulse::new(PulseShape::Gaussian { bt: 0.3 }, 1, 128);
        assert!(err.is_err());
        assert!(PhasePulse::new(PulseShape::Gaussian { bt: -0.1 }, 4, 128).is_err());
    }

    #[test]
    fn bad_arguments_rejected() {
        assert!(PhasePulse::new(PulseShape::Rect, 0, 128).is_err());
        assert!(PhasePulse::new(PulseShape::Rect, 1, 32).is_err());
        assert!(PulseShape::from_kind("LSRC", None).is_err());
        assert!(PulseShape::from_kind("GAUSSIAN", None).is_err());
        assert!(PulseShape::from_kind("LRC", Some(0.3)).is_err());
        assert_eq!(
            PulseShape::from_kind("gaussian", Some(0.3)).unwrap(),
            PulseShape::Gaussian { bt: 0.3 }
        );
    }

    #[test]
    fn invariants_hold_for_all_shapes() {
        for (shape, l) in [
            (PulseShape::Rect, 1),
            (PulseShape::Rect, 3),
            (PulseShape::RaisedCosine, 1),
            (PulseShape::RaisedCosine, 2),
            (PulseShape::RaisedCosine, 3),
            (PulseShape::Gaussian { bt: 0.3 }, 4),
        ] {
            let p = pulse(shape, l);
            let tol = if matches!(shape, PulseShape::Gaussian { .. }) {
                1e-4
            } else {
                1e-9
            };
            assert_eq!(p.q(0.0), 0.0);
            assert!((p.q(l as f64) - 0.5).abs() < tol);
            assert!((p.q(l as f64 + 3.7) - 0.5).abs() < tol);
            // nondecreasing on a grid finer than the table
            let mut prev = 0.0;
            for i in 0..=(l * 1000) {
                let v = p.q(i as f64 / 1000.0);
                assert!(v >= prev - 1e-12, "{shape:?} decreasing at {i}");
                prev = v;
            }
            for k in 0..=l {
                let s = p.q(k as f64) + p.q((l - k) as f64);
                assert!((s - 0.5).abs() < 1e-9, "{shape:?} symmetry at k={k}: {s}");
            }
        }
    }

    #[test]
    fn hermite_matches_closed_form_rc() {
        let p = pulse(PulseShape::RaisedCosine, 2);
        for i in 0..997 {
            let t = 2.0 * i as f64 / 997.0;
            let exact = t / 4.0 - (PI * t).sin() / (4.0 * PI);
            assert!((p.q(t) - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn gaussian_truncation_is_tiny() {
        let c = pulse(PulseShape::Gaussian { bt: 0.3 }, 4).truncation_correction();
        println!("gmsk truncation correction {c:.3e}");
        assert!(c < 1e-4);
    }
}
