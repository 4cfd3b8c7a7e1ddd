//! Bit <-> symbol mapping.
//!
//! Binary schemes are differentially precoded, `a_k = d_k d_{k-1}` with
//! `d = 1 - 2b` and `d_{-1} = +1`, so that a bit is carried by the phase
//! state rather than by a single frequency symbol; a minimum-distance error
//! event then costs one bit instead of two. Larger alphabets use a Gray map.

use crate::cpm::CpmScheme;
use crate::error::{invalid, Result};

pub fn bits_per_symbol(scheme: &CpmScheme) -> Result<usize> {
    let m = scheme.alphabet_size();
    if !m.is_power_of_two() {
        return invalid(format!("alphabet size {m} is not a power of two"));
    }
    Ok(m.trailing_zeros() as usize)
}

/// Maps bits to symbols; `bits.len()` must be a multiple of `log2 M`.
pub fn encode(scheme: &CpmScheme, bits: &[u8]) -> Result<Vec<i32>> {
    let bps = bits_per_symbol(scheme)?;
    if bits.len() % bps != 0 {
        return invalid(format!("{} bits do not fill {bps}-bit symbols", bits.len()));
    }
    if bps == 1 {
        let mut prev = 1;
        return Ok(bits
            .iter()
            .map(|&b| {
                let d = 1 - 2 * i32::from(b & 1);
                let a = d * prev;
                prev = d;
                a
            })
            .collect());
    }
    let m1 = scheme.max_symbol();
    Ok(bits
        .chunks(bps)
        .map(|c| {
            let g = c
                .iter()
                .fold(0usize, |acc, &b| (acc << 1) | usize::from(b & 1));
            2 * gray_to_index(g) as i32 - m1
        })
        .collect())
}

/// Inverse of [`encode`]. For binary schemes `d_init` is the differential
/// reference preceding the first symbol (`+1` at the start of the mapping).
pub fn decode(scheme: &CpmScheme, symbols: &[i32], d_init: i32) -> Result<Vec<u8>> {
    let bps = bits_per_symbol(scheme)?;
    scheme.check_symbols(symbols)?;
    if bps == 1 {
        let mut d = d_init;
        return Ok(symbols
            .iter()
            .map(|&a| {
                d *= a;
                u8::from(d < 0)
            })
            .collect());
    }
    let m1 = scheme.max_symbol();
    let mut out = Vec::with_capacity(symbols.len() * bps);
    for &a in symbols {
        let g = index_to_gray(((a + m1) / 2) as usize);
        out.extend((0..bps).rev().map(|i| ((g >> i) & 1) as u8));
    }
    Ok(out)
}

fn index_to_gray(i: usize) -> usize {
    i ^ (i >> 1)
}

fn gray_to_index(mut g: usize) -> usize {
    let mut i = 0;
    while g != 0 {
        i ^= g;
        g >>= 1;
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gray_neighbours_differ_in_one_bit() {
        let s = CpmScheme::raised_cosine(2, 4, 1, 4).unwrap();
        let syms = encode(&s, &[0, 0, 0, 1, 1, 1, 1, 0]).unwrap();
        assert_eq!(syms, vec![-3, -1, 1, 3]);
    }

    #[test]
    fn differential_reference() {
        let s = CpmScheme::msk();
        assert_eq!(encode(&s, &[0, 0, 1, 1, 0]).unwrap(), vec![1, 1, -1, 1, -1]);
        assert!(encode(&CpmScheme::rect(1, 6, 1, 6).unwrap(), &[0]).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(bits in prop::collection::vec(0u8..2, 0..64), quaternary in any::<bool>()) {
            let s = if quaternary { CpmScheme::raised_cosine(2, 4, 1, 4).unwrap() } else { CpmScheme::gmsk() };
            let n = bits.len() / 2 * 2;
            let syms = encode(&s, &bits[..n]).unwrap();
            prop_assert_eq!(decode(&s, &syms, 1).unwrap(), bits[..n].to_vec());
        }
    }
}
