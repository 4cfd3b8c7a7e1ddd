//! The synchronization preamble and the partial-response lag.

use super::scheme::CpmScheme;
use crate::error::{invalid, Result};

/// Lag of the partial-response phase behind the 1REC template, `(L - 1) / 2`
/// symbols, for symmetric pulses.
pub fn lag_time(scheme: &CpmScheme) -> f64 {
    (scheme.pulse_len() as f64 - 1.0) / 2.0
}

/// `lag_time` rounded to the nearest sample at `sps` samples per symbol.
pub fn lag_samples(scheme: &CpmScheme, sps: usize) -> usize {
    (lag_time(scheme) * sps as f64).round() as usize
}

/// Number of `-(M-1)` symbols appended after the pattern so that the lagged
/// observation window stays inside the known preamble.
pub fn preamble_tail_len(scheme: &CpmScheme) -> usize {
    lag_time(scheme).ceil() as usize
}

/// `L0` pattern symbols (`-(M-1)` for the first quarter, `+(M-1)` for the
/// middle half, `-(M-1)` for the last quarter) followed by the tail.
pub fn optimal_preamble(scheme: &CpmScheme, l0: usize) -> Result<Vec<i32>> {
    if l0 == 0 || l0 % 4 != 0 {
        return invalid(format!(
            "preamble length {l0} is not a positive multiple of 4"
        ));
    }
    let a = scheme.max_symbol();
    let q = l0 / 4;
    let mut out = Vec::with_capacity(l0 + preamble_tail_len(scheme));
    out.extend(std::iter::repeat_n(-a, q));
    out.extend(std::iter::repeat_n(a, 2 * q));
    out.extend(std::iter::repeat_n(-a, q + preamble_tail_len(scheme)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_examples() {
        let msk = CpmScheme::msk();
        assert_eq!(
            optimal_preamble(&msk, 8).unwrap(),
            vec![-1, -1, 1, 1, 1, 1, -1, -1]
        );
        let quaternary = CpmScheme::rect(1, 4, 1, 4).unwrap();
        assert_eq!(
            optimal_preamble(&quaternary, 4).unwrap(),
            vec![-3, 3, 3, -3]
        );
        let gmsk = CpmScheme::gmsk();
        assert_eq!(
            optimal_preamble(&gmsk, 8).unwrap(),
            vec![-1, -1, 1, 1, 1, 1, -1, -1, -1, -1]
        );
        assert!(optimal_preamble(&msk, 6).is_err());
        assert!(optimal_preamble(&msk, 0).is_err());
    }

    #[test]
    fn lag_values() {
        assert_eq!(lag_time(&CpmScheme::msk()), 0.0);
        assert_eq!(
            lag_time(&CpmScheme::raised_cosine(2, 2, 1, 2).unwrap()),
            0.5
        );
        assert_eq!(lag_time(&CpmScheme::gmsk()), 1.5);
        assert_eq!(lag_samples(&CpmScheme::gmsk(), 2), 3);
        assert_eq!(
            lag_samples(&CpmScheme::raised_cosine(2, 2, 1, 2).unwrap(), 1),
            1
        );
        assert_eq!(
            preamble_tail_len(&CpmScheme::raised_cosine(2, 2, 1, 2).unwrap()),
            1
        );
    }
}
