use rayon::prelude::*;
use serde::Serialize;

use super::ensemble::TrialEnsemble;
use crate::spectral::{lp_norm, Field};
use crate::{Error, Result};

/// Spread of `‖T(f,g)‖_{L¹}` over unit-norm pairs; `max` is a lower bound
/// for the `L² × L² → L¹` norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioStats {
    /// In trial order.
    pub ratios: Vec<f64>,
    pub max: f64,
    pub mean: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
}

impl RatioStats {
    pub fn from_ratios(ratios: Vec<f64>) -> Result<Self> {
        if ratios.is_empty() {
            return Err(Error::InvalidParameter("no trials".into()));
        }
        let mut sorted = ratios.clone();
        sorted.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let pos = p * (sorted.len() - 1) as f64;
            let (i, frac) = (pos.floor() as usize, pos.fract());
            let next = sorted[(i + 1).min(sorted.len() - 1)];
            sorted[i] + frac * (next - sorted[i])
        };
        Ok(Self {
            max: *sorted.last().unwrap(),
            mean: ratios.iter().sum::<f64>() / ratios.len() as f64,
            q25: q(0.25),
            median: q(0.5),
            q75: q(0.75),
            ratios,
        })
    }
}

/// Run `op` on every pair of the ensemble. Trials run in parallel and are
/// reduced in trial order.
pub fn norm_ratio_estimate<F>(op: F, ensemble: &TrialEnsemble) -> Result<RatioStats>
where
    F: Fn(&Field, &Field) -> Result<Field> + Sync,
{
    if ensemble.count == 0 {
        return Err(Error::InvalidParameter("empty ensemble".into()));
    }
    let ratios = (0..ensemble.count)
        .into_par_iter()
        .map(|i| {
            let (f, g) = ensemble.pair(i)?;
            // inputs are unit-normalised, so the ratio is the output norm
            lp_norm(&op(&f, &g)?, 1.0)
        })
        .collect::<Result<Vec<f64>>>()?;
    RatioStats::from_ratios(ratios)
}
