//! Burst demodulation: CPM trellis, Viterbi detection, a phase tracker
//! (trained on the preamble, decision-directed over the data) and
//! unique-word alignment.
//!
//! A burst is `preamble (+ tail) | unique word | payload | pad`. The pad is
//! `L` extra random symbols that let the detector see the whole pulse of the
//! last payload symbol; it is not scored.

mod bits;
mod trellis;
mod uw;
mod viterbi;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cpm::{optimal_preamble, CpmScheme};
use crate::error::{invalid, Result};

pub use bits::{bits_per_symbol, decode, encode};
pub use trellis::{Anchor, CpmTrellis};
pub use uw::{unique_word, uw_align, UW_MIN_RATIO};
pub use viterbi::{
    phase_track, train_tracker, viterbi, viterbi_from, TrackerConfig, TrackerState, ViterbiOutput,
};

/// Symbols decoded ahead of the nominal unique-word start so that the
/// alignment can slide in both directions.
pub const UW_SEARCH_SYMBOLS: usize = 2;

pub fn build_trellis(scheme: &CpmScheme, sps: usize) -> Result<CpmTrellis> {
    CpmTrellis::new(scheme, sps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BurstLayout {
    /// Preamble length in symbols (before the tail).
    pub l0: usize,
    /// Unique-word length in symbols.
    pub l_uw: usize,
    /// Payload length in symbols.
    pub l_pay: usize,
    pub uw_bits: Vec<u8>,
}

impl BurstLayout {
    pub fn new(
        scheme: &CpmScheme,
        l0: usize,
        uw_bits_len: usize,
        payload_bits: usize,
    ) -> Result<Self> {
        let bps = bits_per_symbol(scheme)?;
        if uw_bits_len % bps != 0 || payload_bits % bps != 0 {
            return invalid(format!("bit counts must be multiples of {bps}"));
        }
        optimal_preamble(scheme, l0)?;
        Ok(Self {
            l0,
            l_uw: uw_bits_len / bps,
            l_pay: payload_bits / bps,
            uw_bits: unique_word(uw_bits_len),
        })
    }

    pub fn payload_bits(&self, scheme: &CpmScheme) -> usize {
        self.l_pay * bits_per_symbol(scheme).unwrap_or(1)
    }

    /// Transmitted symbols for `payload` bits; pad bits are drawn from `pad`.
    pub fn burst_symbols(
        &self,
        scheme: &CpmScheme,
        payload: &[u8],
        pad: &[u8],
    ) -> Result<Vec<i32>> {
        let bps = bits_per_symbol(scheme)?;
        if payload.len() != self.l_pay * bps || pad.len() != scheme.pulse_len() * bps {
            return invalid("payload or pad length does not match the layout");
        }
        let mut out = optimal_preamble(scheme, self.l0)?;
        let data: Vec<u8> = self
            .uw_bits
            .iter()
            .chain(payload)
            .chain(pad)
            .copied()
            .collect();
        out.extend(encode(scheme, &data)?);
        Ok(out)
    }

    /// Preamble plus tail, in symbols.
    pub fn preamble_len(&self, scheme: &CpmScheme) -> usize {
        self.l0 + crate::cpm::preamble_tail_len(scheme)
    }

    pub fn total_symbols(&self, scheme: &CpmScheme) -> usize {
        self.preamble_len(scheme) + self.l_uw + self.l_pay + scheme.pulse_len()
    }
}

/// Synchronization parameters in stream coordinates: the burst starts at
/// sample `delta` with fractional delay `eps`, and the carrier is
/// `exp(j(2 pi nu n + theta0))` at stream index `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurstSync {
    pub delta: usize,
    pub eps: f64,
    pub nu: f64,
    pub theta0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverConfig {
    pub tracker: Option<TrackerConfig>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BurstDecision {
    pub payload: Vec<u8>,
    /// Detected symbols from the start of the search region.
    pub symbols: Vec<i32>,
    /// Unique-word offset relative to nominal, `None` if the word was not
    /// found (nominal alignment is then used).
    pub uw_shift: Option<isize>,
}

/// De-rotates and re-times the stream for symbols `k0 .. k0 + nsym` of the
/// burst. Returns the samples and the sub-sample offset of sample 0 in
/// each symbol.
pub fn symbol_samples(
    stream: &[Complex64],
    sps: usize,
    sync: &BurstSync,
    k0: usize,
    nsym: usize,
) -> (Vec<Complex64>, f64) {
    let f = sps as f64 * sync.eps;
    let c = f.ceil();
    let offset = c - f;
    let c = c as i64;
    let mut out = Vec::with_capacity(nsym * sps);
    for k in k0..k0 + nsym {
        for j in 0..sps {
            let n = sync.delta as i64 + (sps * k) as i64 + c + j as i64;
            let z = if n >= 0 && (n as usize) < stream.len() {
                let rot =
                    Complex64::from_polar(1.0, -(2.0 * PI * sync.nu * n as f64 + sync.theta0));
                stream[n as usize] * rot
            } else {
                Complex64::new(0.0, 0.0)
            };
            out.push(z);
        }
    }
    (out, offset)
}

/// Demodulates one burst: Viterbi from the known post-preamble state,
/// unique-word alignment, and payload extraction.
pub fn demodulate_burst(
    stream: &[Complex64],
    trellis: &CpmTrellis,
    layout: &BurstLayout,
    sync: &BurstSync,
    cfg: &ReceiverConfig,
) -> Result<BurstDecision> {
    let scheme = trellis.scheme();
    let bps = bits_per_symbol(scheme)?;
    let pre = optimal_preamble(scheme, layout.l0)?;
    let s = UW_SEARCH_SYMBOLS;
    let ks = pre.len() - s;
    let anchor = trellis.anchor(&pre[..ks])?;
    let nsym = s + layout.l_uw + layout.l_pay + scheme.pulse_len();
    let (samples, offset) = symbol_samples(stream, trellis.sps(), sync, ks, nsym);
    // The tracker is trained on the known preamble before the data starts.
    let init = match cfg.tracker {
        Some(t) => {
            let first = scheme.pulse_len() - 1;
            let (pre_samples, _) = symbol_samples(stream, trellis.sps(), sync, first, ks - first);
            train_tracker(trellis, &pre_samples, offset, &pre[..ks], first, t)?
        }
        None => TrackerState::default(),
    };
    let out = viterbi_from(trellis, &samples, offset, anchor, cfg.tracker, init);

    // Differential reference such that d = +1 just before the unique word.
    let d_init = pre[ks..].iter().product::<i32>().signum();
    let bits = decode(scheme, &out.symbols, d_init)?;
    let uw_len = layout.uw_bits.len();
    let search = &bits[..(2 * s * bps + uw_len).min(bits.len())];
    let nominal = s * bps;
    let (start, uw_shift) = match uw_align(search, &layout.uw_bits) {
        Ok(o) => (o, Some(o as isize - nominal as isize)),
        Err(_) => (nominal, None),
    };
    let pay_bits = layout.l_pay * bps;
    let payload = (0..pay_bits)
        .map(|i| bits.get(start + uw_len + i).copied().unwrap_or(0))
        .collect();
    Ok(BurstDecision {
        payload,
        symbols: out.symbols,
        uw_shift,
    })
}

pub fn count_bit_errors(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count() + a.len().abs_diff(b.len())
}
