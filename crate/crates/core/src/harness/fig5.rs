//! Approximation error of the preamble phase model versus L0.

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::analysis::approx_error_numeric;
use crate::cpm::CpmScheme;
use crate::error::Result;

/// Quadrature points per symbol.
pub const FIG5_RESOLUTION: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig5Row {
    pub scheme: String,
    #[serde(rename = "L0")]
    pub l0: usize,
    pub e_a: f64,
    /// `e_a / (h^2 (M-1)^2)`.
    pub e_a_normalized: f64,
    /// Small-angle closed form, normalized.
    pub e_a_analytic_normalized: f64,
}

/// The binary `h = 1/2` family: 1REC, 2REC, 3REC, 1RC, 2RC, 3RC and GMSK.
pub fn fig5_family() -> Vec<CpmScheme> {
    let mut v: Vec<CpmScheme> = (1..=3)
        .map(|l| CpmScheme::rect(l, 2, 1, 2).unwrap())
        .collect();
    v.extend((1..=3).map(|l| CpmScheme::raised_cosine(l, 2, 1, 2).unwrap()));
    v.push(CpmScheme::gmsk());
    v
}

/// The family plus any configured scheme not already in it.
pub fn run_fig5(cfg: &ExperimentConfig) -> Result<Vec<Fig5Row>> {
    let mut schemes = fig5_family();
    for s in cfg.schemes()? {
        if !schemes.iter().any(|f| f.label() == s.label()) {
            schemes.push(s);
        }
    }
    let mut rows = Vec::new();
    for s in &schemes {
        for &l0 in &cfg.sweep.fig5_l0 {
            let r = approx_error_numeric(s, l0, FIG5_RESOLUTION)?;
            rows.push(Fig5Row {
                scheme: s.label(),
                l0,
                e_a: r.e_a_numeric,
                e_a_normalized: r.normalized_numeric(),
                e_a_analytic_normalized: r.normalized_analytic(),
            });
        }
    }
    Ok(rows)
}
