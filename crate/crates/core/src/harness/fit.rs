use serde::Serialize;

use crate::quad::linear_fit;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Pass when `slope ≤ predicted + tolerance`.
    AtMost,
    /// Pass when `|slope - predicted| ≤ tolerance`.
    Within,
}

/// Least-squares slope of `log₂ value` against an axis, with a verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFitReport {
    pub axis: String,
    /// `(x, log₂ value)`.
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub predicted_slope: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub verdict: bool,
}

impl DecayFitReport {
    /// Fit `values` (positive) against `xs`.
    pub fn fit(
        axis: &str,
        xs: &[f64],
        values: &[f64],
        predicted_slope: f64,
        tolerance: f64,
        comparison: Comparison,
    ) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::Fit("abscissae and values differ in length".into()));
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::Fit(format!("cannot take log₂ of {v}")));
        }
        let logs: Vec<f64> = values.iter().map(|v| v.log2()).collect();
        Self::fit_logs(axis, xs, &logs, predicted_slope, tolerance, comparison)
    }

    /// Fit already logarithmic samples.
    pub fn fit_logs(
        axis: &str,
        xs: &[f64],
        logs: &[f64],
        predicted_slope: f64,
        tolerance: f64,
        comparison: Comparison,
    ) -> Result<Self> {
        let (slope, intercept, residual_rms) =
            linear_fit(xs, logs).ok_or_else(|| Error::Fit(format!("need at least two distinct {axis} values")))?;
        Ok(Self::assemble(axis, xs, logs, slope, intercept, residual_rms, predicted_slope, tolerance, comparison))
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        axis: &str,
        xs: &[f64],
        logs: &[f64],
        slope: f64,
        intercept: f64,
        residual_rms: f64,
        predicted_slope: f64,
        tolerance: f64,
        comparison: Comparison,
    ) -> Self {
        let verdict = match comparison {
            Comparison::AtMost => slope <= predicted_slope + tolerance,
            Comparison::Within => (slope - predicted_slope).abs() <= tolerance,
        };
        Self {
            axis: axis.to_string(),
            samples: xs.iter().copied().zip(logs.iter().copied()).collect(),
            slope,
            intercept,
            residual_rms,
            predicted_slope,
            tolerance,
            comparison,
            verdict,
        }
    }

    pub fn summary(&self) -> String {
        let op = match self.comparison {
            Comparison::AtMost => "≤",
            Comparison::Within => "≈",
        };
        format!(
            "{}-slope {:.4} {op} {:.4} ± {:.2} (rms {:.3e}): {}",
            self.axis,
            self.slope,
            self.predicted_slope,
            self.tolerance,
            self.residual_rms,
            if self.verdict { "pass" } else { "fail" }
        )
    }
}
