//! Monte Carlo autocorrelation of the CPM envelope.

use num_complex::Complex64;
use rand::Rng;

use super::modulator::modulate;
use super::scheme::CpmScheme;
use crate::error::{invalid, Result};
use crate::rng::rng_from_seed;

/// Smallest trial count accepted by [`signal_autocorrelation`].
pub const MIN_TRIALS: usize = 10_000;

/// `R_ss(d) = E{s*[n] s[n+d]}` for `d = 0 ..= max_lag`, averaged over random
/// i.i.d. equiprobable symbols and over one cyclostationary period past the
/// start-up transient.
pub fn signal_autocorrelation(
    scheme: &CpmScheme,
    sps: usize,
    max_lag: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<Complex64>> {
    let l = scheme.pulse_len();
    if max_lag > 4 * l * sps {
        return invalid(format!("max_lag {max_lag} exceeds 4*L*N = {}", 4 * l * sps));
    }
    if trials < MIN_TRIALS {
        return invalid(format!("need at least {MIN_TRIALS} trials, got {trials}"));
    }
    if sps == 0 {
        return invalid("samples per symbol must be >= 1");
    }
    // Start after L symbols so every sample sees a full random pulse history.
    let start = l * sps;
    let span = (l + 1) * sps;
    let nsym = 2 * l + 1 + max_lag.div_ceil(sps);
    let alphabet = scheme.alphabet();
    let mut rng = rng_from_seed(seed);
    let mut acc = vec![Complex64::new(0.0, 0.0); max_lag + 1];
    let mut syms = vec![0i32; nsym];
    for _ in 0..trials {
        for s in syms.iter_mut() {
            *s = alphabet[rng.random_range(0..alphabet.len())];
        }
        let s = modulate(scheme, &syms, sps)?.samples;
        for n in start..start + span {
            let c = s[n].conj();
            for (d, a) in acc.iter_mut().enumerate() {
                *a += c * s[n + d];
            }
        }
    }
    let norm = 1.0 / (trials * span) as f64;
    Ok(acc.into_iter().map(|a| a * norm).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    // Exhaustive average over every length-6 MSK block.
    fn msk_oracle(sps: usize, d: usize) -> Complex64 {
        let s = CpmScheme::msk();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut count = 0usize;
        for bits in 0..64u32 {
            let syms: Vec<i32> = (0..6)
                .map(|i| if bits >> i & 1 == 1 { 1 } else { -1 })
                .collect();
            let x = modulate(&s, &syms, sps).unwrap().samples;
            for n in sps..2 * sps {
                acc += x[n].conj() * x[n + d];
                count += 1;
            }
        }
        acc / count as f64
    }

    #[test]
    fn msk_matches_exhaustive_average() {
        let s = CpmScheme::msk();
        let r = signal_autocorrelation(&s, 2, 8, 20_000, 7).unwrap();
        assert!((r[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let want = msk_oracle(2, 2);
        assert!((want.re - 0.25).abs() < 1e-12);
        // Per-product variance is <= 1, so the MC standard error is below
        // 1/sqrt(trials * span).
        let se = 1.0 / ((20_000 * 4) as f64).sqrt();
        assert!((r[2] - want).norm() < 3.0 * se, "{} vs {}", r[2], want);
        for d in 3..=8 {
            assert!(r[d].norm() < 0.01, "d={d}: {}", r[d]);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let s = CpmScheme::msk();
        assert!(signal_autocorrelation(&s, 2, 9, 10_000, 0).is_err());
        assert!(signal_autocorrelation(&s, 2, 4, 100, 0).is_err());
    }
}
