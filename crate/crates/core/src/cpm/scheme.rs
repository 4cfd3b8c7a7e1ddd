use std::fmt;
use std::ops::Deref;

use super::pulse::{PhasePulse, PulseShape, DEFAULT_RESOLUTION};
use crate::error::{invalid, Error, Result};

/// Rational modulation index `h = num/den` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModIndex {
    num: u32,
    den: u32,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl ModIndex {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return invalid(format!("modulation index {num}/{den} outside (0, 1]"));
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn value(&self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }
}

impl fmt::Display for ModIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// A single-h CPM scheme: alphabet size, modulation index and phase pulse.
#[derive(Debug, Clone)]
pub struct CpmScheme {
    alphabet: usize,
    index: ModIndex,
    pulse: PhasePulse,
}

impl CpmScheme {
    pub fn new(alphabet: usize, index: ModIndex, shape: PulseShape, length: usize) -> Result<Self> {
        Self::with_resolution(alphabet, index, shape, length, DEFAULT_RESOLUTION)
    }

    pub fn with_resolution(
        alphabet: usize,
        index: ModIndex,
        shape: PulseShape,
        length: usize,
        resolution: usize,
    ) -> Result<Self> {
        if alphabet < 2 || alphabet % 2 != 0 {
            return invalid(format!("alphabet size {alphabet} must be even and >= 2"));
        }
        let pulse = PhasePulse::new(shape, length, resolution)?;
        Ok(Self {
            alphabet,
            index,
            pulse,
        })
    }

    /// Binary 1REC with h = 1/2.
    pub fn msk() -> Self {
        Self::new(2, ModIndex::new(1, 2).unwrap(), PulseShape::Rect, 1).unwrap()
    }

    /// Binary GMSK, h = 1/2, BT = 0.3, pulse truncated to L = 4.
    pub fn gmsk() -> Self {
        Self::new(
            2,
            ModIndex::new(1, 2).unwrap(),
            PulseShape::Gaussian { bt: 0.3 },
            4,
        )
        .unwrap()
    }

    /// LRC with the given alphabet and index.
    pub fn raised_cosine(length: usize, alphabet: usize, num: u32, den: u32) -> Result<Self> {
        Self::new(
            alphabet,
            ModIndex::new(num, den)?,
            PulseShape::RaisedCosine,
            length,
        )
    }

    /// LREC with the given alphabet and index.
    pub fn rect(length: usize, alphabet: usize, num: u32, den: u32) -> Result<Self> {
        Self::new(alphabet, ModIndex::new(num, den)?, PulseShape::Rect, length)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    pub fn index(&self) -> ModIndex {
        self.index
    }

    pub fn h(&self) -> f64 {
        self.index.value()
    }

    pub fn pulse(&self) -> &PhasePulse {
        &self.pulse
    }

    pub fn shape(&self) -> PulseShape {
        self.pulse.shape()
    }

    /// Pulse length `L` in symbols.
    pub fn pulse_len(&self) -> usize {
        self.pulse.length()
    }

    /// Largest symbol magnitude, `M - 1`.
    pub fn max_symbol(&self) -> i32 {
        self.alphabet as i32 - 1
    }

    /// `(M - 1) * pi * h`, the preamble phase slope in radians per symbol.
    pub fn slope(&self) -> f64 {
        f64::from(self.max_symbol()) * std::f64::consts::PI * self.h()
    }

    /// `{-(M-1), ..., -1, 1, ..., M-1}` in increasing order.
    pub fn alphabet(&self) -> Vec<i32> {
        (0..self.alphabet as i32)
            .map(|i| 2 * i - self.max_symbol())
            .collect()
    }

    pub fn is_valid_symbol(&self, s: i32) -> bool {
        s % 2 != 0 && s.abs() <= self.max_symbol()
    }

    pub fn check_symbols(&self, symbols: &[i32]) -> Result<()> {
        match symbols.iter().find(|&&s| !self.is_valid_symbol(s)) {
            Some(&symbol) => Err(Error::InvalidSymbol {
                symbol,
                alphabet: self.alphabet,
            }),
            None => Ok(()),
        }
    }

    /// Short human-readable label, e.g. `GMSK`, `2RC M=4 h=1/4`.
    pub fn label(&self) -> String {
        let l = self.pulse_len();
        match (self.shape(), self.alphabet, self.index.num, self.index.den) {
            (PulseShape::Rect, 2, 1, 2) if l == 1 => "MSK".to_string(),
            (PulseShape::Gaussian { bt }, 2, 1, 2) => format!("GMSK(BT={bt},L={l})"),
            (shape, m, _, _) => format!("{l}{shape} M={m} h={}", self.index),
        }
    }
}

impl fmt::Display for CpmScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Symbols drawn from a scheme's alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSequence(Vec<i32>);

impl SymbolSequence {
    pub fn new(scheme: &CpmScheme, symbols: Vec<i32>) -> Result<Self> {
        scheme.check_symbols(&symbols)?;
        Ok(Self(symbols))
    }

    pub fn into_inner(self) -> Vec<i32> {
        self.0
    }
}

impl Deref for SymbolSequence {
    type Target = [i32];

    fn deref(&self) -> &[i32] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_is_reduced() {
        let h = ModIndex::new(2, 4).unwrap();
        assert_eq!((h.num(), h.den()), (1, 2));
        assert!(ModIndex::new(0, 3).is_err());
        assert!(ModIndex::new(3, 2).is_err());
    }

    #[test]
    fn alphabet_and_validation() {
        let s = CpmScheme::raised_cosine(2, 4, 1, 4).unwrap();
        assert_eq!(s.alphabet(), vec![-3, -1, 1, 3]);
        assert!(s.check_symbols(&[1, -3, 3]).is_ok());
        assert!(matches!(
            s.check_symbols(&[1, 2]),
            Err(Error::InvalidSymbol { symbol: 2, .. })
        ));
        assert!(s.check_symbols(&[5]).is_err());
        assert!(CpmScheme::rect(1, 3, 1, 2).is_err());
        assert_eq!(CpmScheme::msk().label(), "MSK");
    }
}
