//! Unique-word generation and alignment.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Minimum ratio of the correlation peak to the runner-up.
pub const UW_MIN_RATIO: f64 = 2.0;

/// Fixed pseudo-random unique word of `len` bits.
pub fn unique_word(len: usize) -> Vec<u8> {
    let mut rng = rng_from_seed(0x5557_0000 + len as u64);
    (0..len).map(|_| rng.random_range(0..2u8)).collect()
}

/// Offset of `uw` in `bits` by signed bipolar correlation. Fails when the
/// peak is not at least [`UW_MIN_RATIO`] times the next-largest value.
pub fn uw_align(bits: &[u8], uw: &[u8]) -> Result<usize> {
    if uw.is_empty() || bits.len() < uw.len() {
        return Err(Error::UniqueWordNotFound { ratio: 0.0 });
    }
    let corr: Vec<i64> = (0..=bits.len() - uw.len())
        .map(|o| {
            uw.iter()
                .zip(&bits[o..])
                .map(|(&u, &b)| if u == b { 1 } else { -1 })
                .sum()
        })
        .collect();
    let (best, &peak) =
        corr.iter().enumerate().fold(
            (0, &i64::MIN),
            |acc, (i, c)| if *c > *acc.1 { (i, c) } else { acc },
        );
    let runner = corr
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != best)
        .map(|(_, &c)| c)
        .max();
    let ratio = match runner {
        Some(r) if r > 0 => peak as f64 / r as f64,
        _ if peak > 0 => f64::INFINITY,
        _ => 0.0,
    };
    if ratio < UW_MIN_RATIO {
        return Err(Error::UniqueWordNotFound { ratio });
    }
    Ok(best)
}
