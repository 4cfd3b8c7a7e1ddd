//! Viterbi sequence detection with an optional decision-directed phase
//! tracker.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::trellis::{Anchor, CpmTrellis};

/// Loop filter of the decision-directed phase tracker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackerConfig {
    /// Noise bandwidth `Bn Ts` (per symbol).
    pub loop_bw: f64,
    /// 1 or 2.
    pub order: u8,
}

impl TrackerConfig {
    pub fn first_order(loop_bw: f64) -> Self {
        Self { loop_bw, order: 1 }
    }

    // (proportional, integral) gains; second order uses zeta = 1/sqrt(2).
    fn gains(&self) -> (f64, f64) {
        if self.order >= 2 {
            let zeta = std::f64::consts::FRAC_1_SQRT_2;
            let wn = 8.0 * zeta * self.loop_bw / (4.0 * zeta * zeta + 1.0);
            (2.0 * zeta * wn, wn * wn)
        } else {
            (4.0 * self.loop_bw, 0.0)
        }
    }
}

#[derive(Debug, Clone)]
pub struct ViterbiOutput {
    /// Detected symbols.
    pub symbols: Vec<i32>,
    /// Input samples after phase correction.
    pub corrected: Vec<Complex64>,
    /// Tracker phase applied to each symbol.
    pub phase: Vec<f64>,
    /// Final path metric.
    pub metric: f64,
}

/// Detects `samples.len() / N` symbols starting from `anchor`.
///
/// `samples` holds `N` samples per symbol, sample `j` of symbol `k` taken at
/// `k + (j + offset) / N` symbol periods; `offset` is in `[0, 1)`. The path
/// is traced back from the best final state after the last symbol, so the
/// decision depth always covers the whole block. With a tracker, each
/// symbol's samples are rotated by the current phase estimate, and the
/// estimate is updated from the best state's incoming branch (zero decision
/// delay).
pub fn viterbi(
    trellis: &CpmTrellis,
    samples: &[Complex64],
    offset: f64,
    anchor: Anchor,
    tracker: Option<TrackerConfig>,
) -> ViterbiOutput {
    viterbi_from(
        trellis,
        samples,
        offset,
        anchor,
        tracker,
        TrackerState::default(),
    )
}

/// Loop state of the phase tracker: phase and per-symbol frequency
/// (integrator) estimates, radians.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TrackerState {
    pub phase: f64,
    pub freq: f64,
}

/// [`viterbi`] with the tracker starting from `init`.
pub fn viterbi_from(
    trellis: &CpmTrellis,
    samples: &[Complex64],
    offset: f64,
    anchor: Anchor,
    tracker: Option<TrackerConfig>,
    init: TrackerState,
) -> ViterbiOutput {
    let sps = trellis.sps();
    let nsym = samples.len() / sps;
    let ns = trellis.num_states();
    let m = trellis.alphabet_size();
    let refs = trellis.branch_refs(offset);

    let mut metric = vec![f64::NEG_INFINITY; ns];
    metric[anchor.0] = 0.0;
    let mut next_metric = vec![f64::NEG_INFINITY; ns];
    // survivor[k * ns + s] = (previous state, input)
    let mut survivor = vec![(0u32, 0u8); nsym * ns];
    let mut branch_corr = vec![Complex64::new(0.0, 0.0); ns * m];
    let (g1, g2) = tracker.map(|t| t.gains()).unwrap_or((0.0, 0.0));
    let (mut psi, mut omega) = (init.phase, init.freq);
    let mut corrected = Vec::with_capacity(nsym * sps);
    let mut phase = Vec::with_capacity(nsym);

    for k in 0..nsym {
        let rot = Complex64::from_polar(1.0, -psi);
        let y: Vec<Complex64> = samples[k * sps..(k + 1) * sps]
            .iter()
            .map(|z| z * rot)
            .collect();
        corrected.extend_from_slice(&y);
        phase.push(psi);
        next_metric.iter_mut().for_each(|v| *v = f64::NEG_INFINITY);
        for s in 0..ns {
            if metric[s] == f64::NEG_INFINITY {
                continue;
            }
            for a in 0..m {
                let base = (s * m + a) * sps;
                let c: Complex64 = y
                    .iter()
                    .zip(&refs[base..base + sps])
                    .map(|(y, r)| y * r.conj())
                    .sum();
                branch_corr[s * m + a] = c;
                let cand = metric[s] + c.re;
                let nx = trellis.next_state(s, a);
                if cand > next_metric[nx] {
                    next_metric[nx] = cand;
                    survivor[k * ns + nx] = (s as u32, a as u8);
                }
            }
        }
        std::mem::swap(&mut metric, &mut next_metric);
        if tracker.is_some() {
            let best = argmax(&metric);
            let (ps, a) = survivor[k * ns + best];
            let err = branch_corr[ps as usize * m + a as usize].arg();
            omega += g2 * err;
            psi = wrap(psi + g1 * err + omega);
        }
    }

    let mut s = argmax(&metric);
    let final_metric = metric[s];
    let mut symbols = vec![0i32; nsym];
    for k in (0..nsym).rev() {
        let (ps, a) = survivor[k * ns + s];
        symbols[k] = trellis.symbol(a as usize);
        s = ps as usize;
    }
    ViterbiOutput {
        symbols,
        corrected,
        phase,
        metric: final_metric,
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

fn wrap(x: f64) -> f64 {
    (x + PI).rem_euclid(2.0 * PI) - PI
}

/// Runs the tracker data-aided over known symbols. `known` holds every
/// symbol from the burst start; `samples` covers symbols `first ..
/// known.len()` (`first >= L - 1`), laid out as for [`viterbi`].
pub fn train_tracker(
    trellis: &CpmTrellis,
    samples: &[Complex64],
    offset: f64,
    known: &[i32],
    first: usize,
    tracker: TrackerConfig,
) -> crate::error::Result<TrackerState> {
    let sps = trellis.sps();
    let m = trellis.alphabet_size();
    let refs = trellis.branch_refs(offset);
    let (g1, g2) = tracker.gains();
    let mut st = TrackerState::default();
    for (i, k) in (first..known.len()).enumerate() {
        let s = trellis.anchor(&known[..k])?.0;
        let a = (known[k] + trellis.scheme().max_symbol()) as usize / 2;
        let base = (s * m + a) * sps;
        let rot = Complex64::from_polar(1.0, -st.phase);
        let c: Complex64 = samples[i * sps..(i + 1) * sps]
            .iter()
            .zip(&refs[base..base + sps])
            .map(|(y, r)| y * rot * r.conj())
            .sum();
        let err = c.arg();
        st.freq += g2 * err;
        st.phase = wrap(st.phase + g1 * err + st.freq);
    }
    Ok(st)
}

/// Runs the tracking detector and returns only the phase-corrected stream.
pub fn phase_track(
    trellis: &CpmTrellis,
    samples: &[Complex64],
    offset: f64,
    anchor: Anchor,
    loop_bw: f64,
) -> Vec<Complex64> {
    viterbi(
        trellis,
        samples,
        offset,
        anchor,
        Some(TrackerConfig::first_order(loop_bw)),
    )
    .corrected
}
