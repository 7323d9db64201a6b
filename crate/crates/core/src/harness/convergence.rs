use serde::Serialize;

use crate::operators::BilinearInputs;
use crate::spectral::{Field, Symbol};
use crate::zoo::bochner_riesz_symbol;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub t: f64,
    /// `‖A_t(f,g) - f·g‖_∞` on the grid.
    pub sup_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub lambda: f64,
    pub n: usize,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Errors never grow by more than `slack` (relative) as `t` decreases.
    pub fn non_increasing(&self, slack: f64) -> bool {
        self.rows.windows(2).all(|w| w[1].sup_error <= w[0].sup_error * (1.0 + slack))
    }

    pub fn last_error(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.sup_error)
    }
}

/// Bochner-Riesz means `A_t^λ(f,g)` against `f·g` for decreasing `t`.
///
/// A dilation is unresolvable once `m(tζ)` no longer differs from `m(0)`
/// anywhere on the frequency box: the grid then cannot tell `A_t` from
/// the product.
pub fn convergence_study(lambda: f64, n: usize, f: &Field, g: &Field, t_list: &[f64]) -> Result<ConvergenceTable> {
    let m = bochner_riesz_symbol(n, lambda)?;
    if f.grid().dim() != n {
        return Err(Error::InvalidGrid(format!("inputs must be {n}-dimensional")));
    }
    if t_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter("t values must be strictly decreasing".into()));
    }
    let inputs = BilinearInputs::new(f, g)?;
    let corner = vec![f.grid().nyquist(); 2 * n];
    let product = f.mul(g)?;
    let mut rows = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let edge: Vec<f64> = corner.iter().map(|v| v * t).collect();
        if (m.eval(&edge).re - 1.0).abs() < 1e-13 {
            return Err(Error::Resolution(format!("t = {t:e}: the dilated symbol is constant to 1e-13 on the grid")));
        }
        let a = inputs.apply(&m, t)?;
        let sup_error = a.sub(&product)?.max_abs();
        rows.push(ConvergenceRow { t, sup_error });
    }
    Ok(ConvergenceTable { lambda, n, rows })
}
