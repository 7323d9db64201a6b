use serde::Serialize;

use super::tree::CoeffTree;
use crate::harness::{Comparison, DecayFitReport};
use crate::quad::{linear_fit, plane_fit};
use crate::{Error, Result};

/// `(j, γ, sup |a_ω|)`.
pub type Cell = (u32, u32, f64);

/// Per-`(j, γ)` sup of `|a_ω|` with fitted slopes on both axes.
#[derive(Debug, Clone, Serialize)]
pub struct DecayProfile {
    /// `(j, γ, sup |a_ω|)` for every nonempty cell.
    pub cells: Vec<Cell>,
    /// Joint fit of `log₂ sup ≈ c + s_j·j + s_γ·γ`.
    pub j_fit: DecayFitReport,
    pub gamma_fit: DecayFitReport,
    /// `(γ, j-slope)` along each fixed level.
    pub j_slopes_by_gamma: Vec<(u32, f64)>,
    /// `(j, γ-slope)` along each fixed piece.
    pub gamma_slopes_by_j: Vec<(u32, f64)>,
}

impl DecayProfile {
    pub fn verdict(&self) -> bool {
        self.j_fit.verdict && self.gamma_fit.verdict
    }
}

/// Fit the coefficient decay of a family of pieces against `-λ` in `j` and
/// `-(s + n - 2n/r)` in `γ`.
///
/// Every tree must carry its piece number. Levels above `gamma_cap` are
/// ignored when given.
pub fn coeff_decay_profile(
    trees: &[CoeffTree],
    r: f64,
    s: f64,
    n: usize,
    lambda: f64,
    tolerance: f64,
    gamma_cap: Option<u32>,
) -> Result<DecayProfile> {
    let mut cells = Vec::new();
    let mut js = Vec::new();
    let mut gammas = std::collections::BTreeSet::new();
    for t in trees {
        let j = t.j.ok_or_else(|| Error::Fit("tree without a piece number".into()))?;
        js.push(j);
        for (g, sup) in t.level_sups().into_iter().enumerate() {
            let g = g as u32;
            if gamma_cap.is_some_and(|c| g > c) || sup <= 0.0 {
                continue;
            }
            gammas.insert(g);
            cells.push((j, g, sup));
        }
    }
    js.sort_unstable();
    js.dedup();
    if js.len() < 4 || gammas.len() < 3 {
        return Err(Error::Fit(format!("need at least 4 pieces and 3 levels, have {} and {}", js.len(), gammas.len())));
    }
    let x: Vec<f64> = cells.iter().map(|c| c.0 as f64).collect();
    let y: Vec<f64> = cells.iter().map(|c| c.1 as f64).collect();
    let z: Vec<f64> = cells.iter().map(|c| c.2.log2()).collect();
    let (sj, sg, c0, rms) = plane_fit(&x, &y, &z).ok_or_else(|| Error::Fit("degenerate (j, γ) design".into()))?;

    let predicted_gamma = -(s + n as f64 - 2.0 * n as f64 / r);
    let j_fit = DecayFitReport::assemble("j", &x, &z, sj, c0, rms, -lambda, tolerance, Comparison::AtMost);
    let gamma_fit =
        DecayFitReport::assemble("gamma", &y, &z, sg, c0, rms, predicted_gamma, tolerance, Comparison::AtMost);

    let row_slope = |pick: &dyn Fn(&Cell) -> Option<f64>| {
        let (xs, zs): (Vec<f64>, Vec<f64>) = cells.iter().filter_map(|c| pick(c).map(|x| (x, c.2.log2()))).unzip();
        linear_fit(&xs, &zs).map(|f| f.0)
    };
    let j_slopes_by_gamma =
        gammas.iter().filter_map(|&g| row_slope(&|c| (c.1 == g).then_some(c.0 as f64)).map(|s| (g, s))).collect();
    let gamma_slopes_by_j =
        js.iter().filter_map(|&j| row_slope(&|c| (c.0 == j).then_some(c.1 as f64)).map(|s| (j, s))).collect();

    Ok(DecayProfile { cells, j_fit, gamma_fit, j_slopes_by_gamma, gamma_slopes_by_j })
}
