use serde::Serialize;

use crate::quad::{log_midpoints, log_spaced};
use crate::spectral::{Grid, Support};
use crate::{Error, Result};

/// Density used when none is configured.
pub const DEFAULT_PER_OCTAVE: usize = 16;

/// Log-spaced dilation parameters.
///
/// `log_step` is the common cell width in `log t`, the weight of the
/// midpoint rule for `∫ ... dt/t` when the grid was built by
/// [`DilationGrid::midpoints`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilationGrid {
    t_values: Vec<f64>,
    pub t_min: f64,
    pub t_max: f64,
    pub log_step: f64,
}

impl DilationGrid {
    /// Endpoints included, `per_octave` points per doubling.
    pub fn log_spaced(t_min: f64, t_max: f64, per_octave: usize) -> Result<Self> {
        check_range(t_min, t_max)?;
        if per_octave == 0 {
            return Err(Error::InvalidParameter("per_octave must be positive".into()));
        }
        let count = ((t_max / t_min).log2() * per_octave as f64).ceil().max(0.0) as usize + 1;
        Self::with_count(t_min, t_max, count)
    }

    pub fn with_count(t_min: f64, t_max: f64, count: usize) -> Result<Self> {
        check_range(t_min, t_max)?;
        if count == 0 {
            return Err(Error::InvalidParameter("empty dilation grid".into()));
        }
        let t_values = log_spaced(t_min, t_max, count);
        let log_step = if count > 1 { (t_max / t_min).ln() / (count - 1) as f64 } else { 0.0 };
        Ok(Self { t_values, t_min, t_max, log_step })
    }

    /// Midpoints of `count` equal cells in `log s` over `[s_min, s_max]`.
    pub fn midpoints(s_min: f64, s_max: f64, count: usize) -> Result<Self> {
        check_range(s_min, s_max)?;
        if count == 0 {
            return Err(Error::InvalidParameter("empty dilation grid".into()));
        }
        let (t_values, log_step) = log_midpoints(s_min, s_max, count);
        Ok(Self { t_values, t_min: s_min, t_max: s_max, log_step })
    }

    pub fn from_values(mut t_values: Vec<f64>) -> Result<Self> {
        if t_values.is_empty() {
            return Err(Error::InvalidParameter("empty dilation grid".into()));
        }
        if t_values.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return Err(Error::InvalidParameter("dilations must be positive".into()));
        }
        t_values.sort_by(f64::total_cmp);
        t_values.dedup();
        let (t_min, t_max) = (t_values[0], *t_values.last().unwrap());
        Ok(Self { t_values, t_min, t_max, log_step: 0.0 })
    }

    /// Same endpoints, every log-cell halved; contains all current points.
    pub fn refined(&self) -> Self {
        let count = 2 * (self.len() - 1) + 1;
        Self::with_count(self.t_min, self.t_max, count).expect("range already validated")
    }

    pub fn values(&self) -> &[f64] {
        &self.t_values
    }

    pub fn len(&self) -> usize {
        self.t_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_values.is_empty()
    }

    /// Dilations for which `m(t·)` still fits the frequency grid: the
    /// support's outer edge must reach at least one cell and its inner
    /// edge must lie inside the box.
    pub fn valid_range(support: Support, grid: &Grid) -> (f64, f64) {
        let nyquist = grid.nyquist();
        let lo = support.outer_radius().map_or(0.0, |r| 1.0 / (2.0 * nyquist * r));
        let inner = support.inner_radius();
        let hi = if inner > 0.0 { grid.extent() / inner } else { f64::INFINITY };
        (lo, hi)
    }

    pub fn aliasing_warnings(&self, support: Support, grid: &Grid) -> Vec<String> {
        let (lo, hi) = Self::valid_range(support, grid);
        let mut w = Vec::new();
        if self.t_min < lo {
            w.push(format!("t_min = {:e} is below the resolvable scale {lo:e}", self.t_min));
        }
        if self.t_max > hi {
            w.push(format!("t_max = {:e} exceeds {hi:e}; dilated support leaves the grid", self.t_max));
        }
        w
    }
}

fn check_range(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0) || !(b >= a) || !b.is_finite() {
        return Err(Error::InvalidParameter(format!("bad dilation range [{a}, {b}]")));
    }
    Ok(())
}

/// Radial extent `[ρ_lo, ρ_hi]` of `f̂ ⊗ ĝ` as seen by a bilinear symbol,
/// given the input bands `[a_in, a_out]` and `[b_in, b_out]`.
pub fn joint_band(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    ((a.0 * a.0 + b.0 * b.0).sqrt(), (a.1 * a.1 + b.1 * b.1).sqrt())
}

/// Dilations `s` for which the annulus `support` meets the joint band.
pub fn effective_range(support: Support, band: (f64, f64)) -> Result<(f64, f64)> {
    let outer = support
        .outer_radius()
        .ok_or_else(|| Error::InvalidParameter("unbounded support has no effective range".into()))?;
    let inner = support.inner_radius();
    if inner <= 0.0 || band.0 <= 0.0 {
        return Err(Error::InvalidParameter("effective range needs an annulus and a band away from the origin".into()));
    }
    Ok((inner / band.1, outer / band.0))
}
