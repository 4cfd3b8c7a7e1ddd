//! CPM state decomposition for rational `h = K/p`.
//!
//! A state is the accumulated phase of symbols older than `L` (a multiple of
//! `pi/p`) together with the `L - 1` most recent symbols.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cpm::CpmScheme;
use crate::error::{invalid, Result};

#[derive(Debug, Clone)]
pub struct CpmTrellis {
    scheme: CpmScheme,
    sps: usize,
    /// Phase states `P`.
    phase_states: usize,
    /// Phase-state spacing in units of `pi/p` (2 when `K` is even).
    phase_unit: u32,
    corr_states: usize,
    /// `next[s * M + a]`.
    next: Vec<usize>,
}

/// Starting state of the trellis, taken from known symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Anchor(pub usize);

impl CpmTrellis {
    pub fn new(scheme: &CpmScheme, sps: usize) -> Result<Self> {
        if sps == 0 {
            return invalid("samples per symbol must be >= 1");
        }
        let (k, p) = (scheme.index().num(), scheme.index().den());
        let phase_unit = if k % 2 == 0 { 2 } else { 1 };
        let phase_states = (2 * p / phase_unit) as usize;
        let m = scheme.alphabet_size();
        let corr_states = m.pow(scheme.pulse_len() as u32 - 1);
        let mut t = Self {
            scheme: scheme.clone(),
            sps,
            phase_states,
            phase_unit,
            corr_states,
            next: Vec::new(),
        };
        let n = t.num_states();
        t.next = (0..n * m).map(|i| t.successor(i / m, i % m)).collect();
        Ok(t)
    }

    pub fn scheme(&self) -> &CpmScheme {
        &self.scheme
    }

    pub fn sps(&self) -> usize {
        self.sps
    }

    pub fn phase_states(&self) -> usize {
        self.phase_states
    }

    pub fn corr_states(&self) -> usize {
        self.corr_states
    }

    pub fn num_states(&self) -> usize {
        self.phase_states * self.corr_states
    }

    pub fn alphabet_size(&self) -> usize {
        self.scheme.alphabet_size()
    }

    pub fn next_state(&self, state: usize, input: usize) -> usize {
        self.next[state * self.alphabet_size() + input]
    }

    /// Symbol value of alphabet index `i`.
    pub fn symbol(&self, i: usize) -> i32 {
        2 * i as i32 - self.scheme.max_symbol()
    }

    fn symbol_index(&self, a: i32) -> usize {
        ((a + self.scheme.max_symbol()) / 2) as usize
    }

    fn split(&self, state: usize) -> (usize, usize) {
        (state / self.corr_states, state % self.corr_states)
    }

    /// Phase of the state's settled part, radians.
    fn state_phase(&self, phase_idx: usize) -> f64 {
        let p = self.scheme.index().den();
        PI * (phase_idx as u32 * self.phase_unit) as f64 / p as f64
    }

    // Phase index advance for an oldest symbol `a`: K * a in units of pi/p.
    fn advance(&self, phase_idx: usize, a: i32) -> usize {
        let k = self.scheme.index().num() as i64;
        let modulus = 2 * self.scheme.index().den() as i64;
        let m = (phase_idx as i64 * self.phase_unit as i64 + k * a as i64).rem_euclid(modulus);
        (m / self.phase_unit as i64) as usize
    }

    fn successor(&self, state: usize, input: usize) -> usize {
        let (ph, c) = self.split(state);
        let mm = self.alphabet_size();
        let l = self.scheme.pulse_len();
        let oldest = if l == 1 {
            self.symbol(input)
        } else {
            self.symbol(c / mm.pow(l as u32 - 2))
        };
        let c2 = if l == 1 {
            0
        } else {
            (c * mm + input) % self.corr_states
        };
        self.advance(ph, oldest) * self.corr_states + c2
    }

    /// State reached after transmitting `known` from the start of the burst.
    pub fn anchor(&self, known: &[i32]) -> Result<Anchor> {
        self.scheme.check_symbols(known)?;
        let l = self.scheme.pulse_len();
        let n = known.len();
        if n < l - 1 {
            return invalid("anchor needs at least L - 1 known symbols");
        }
        let settled = n.saturating_sub(l - 1);
        let mut ph = 0;
        for &a in &known[..settled] {
            ph = self.advance(ph, a);
        }
        let mm = self.alphabet_size();
        let mut c = 0;
        // Digit i holds the symbol i + 1 periods back.
        for i in (0..l - 1).rev() {
            c = c * mm + self.symbol_index(known[n - 1 - i]);
        }
        Ok(Anchor(ph * self.corr_states + c))
    }

    /// Noiseless branch waveforms for every `(state, input)`, sampled at
    /// `k + (j + offset) / N`, `j = 0 .. N`, relative to the symbol start.
    pub fn branch_refs(&self, offset: f64) -> Vec<Complex64> {
        let n = self.num_states();
        let mm = self.alphabet_size();
        let l = self.scheme.pulse_len();
        let pulse = self.scheme.pulse();
        let two_pi_h = 2.0 * PI * self.scheme.h();
        let mut out = Vec::with_capacity(n * mm * self.sps);
        for s in 0..n {
            let (ph, c) = self.split(s);
            let base = self.state_phase(ph);
            for input in 0..mm {
                let a = f64::from(self.symbol(input));
                for j in 0..self.sps {
                    let tau = (j as f64 + offset) / self.sps as f64;
                    let mut acc = a * pulse.q(tau);
                    let mut cc = c;
                    for back in 1..l {
                        acc += f64::from(self.symbol(cc % mm)) * pulse.q(tau + back as f64);
                        cc /= mm;
                    }
                    out.push(Complex64::from_polar(1.0, base + two_pi_h * acc));
                }
            }
        }
        out
    }
}
