use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::dilation::DilationGrid;
use crate::spectral::{fft_forward, lp_norm, transform_axis, Field, Grid, Symbol};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Transforms of a fixed input pair, reused across dilations and symbols.
#[derive(Debug, Clone)]
pub struct BilinearInputs {
    grid: Grid,
    fhat: Vec<Complex64>,
    ghat: Vec<Complex64>,
    /// `e^{2πi p/N}`.
    roots: Vec<Complex64>,
}

impl BilinearInputs {
    pub fn new(f: &Field, g: &Field) -> Result<Self> {
        f.check_same_grid(g)?;
        let grid = *f.grid();
        let n = grid.points_per_axis();
        let roots = (0..n).map(|p| Complex64::from_polar(1.0, 2.0 * PI * p as f64 / n as f64)).collect();
        Ok(Self { grid, fhat: fft_forward(f)?.into_values(), ghat: fft_forward(g)?.into_values(), roots })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `e^{2πi x·ξ}` at spatial node `x` and frequency node `ξ`.
    fn phase(&self, x: &[usize], xi: &[usize]) -> Complex64 {
        let n = self.grid.points_per_axis() as i64;
        let half = n / 2;
        let mut p = 0i64;
        for (j, k) in x.iter().zip(xi) {
            p += (*j as i64 - half) * (*k as i64 - half);
        }
        self.roots[p.rem_euclid(n) as usize]
    }

    /// `S_t(f,g)(x) = ∫∫ m(tξ,tη) f̂(ξ) ĝ(η) e^{2πix·(ξ+η)} dξ dη`.
    ///
    /// For every `ξ` row the `η` integral is done by an inverse transform,
    /// then the `ξ` sum is read off on the diagonal. Rows where `f̂` or the
    /// symbol vanish are skipped.
    pub fn apply(&self, m: &dyn Symbol, t: f64) -> Result<Field> {
        let grid = self.grid;
        let dim = grid.dim();
        if m.dim() != 2 * dim {
            return Err(Error::InvalidGrid(format!(
                "bilinear symbol of dimension {} for {dim}-dimensional inputs",
                m.dim()
            )));
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("dilation t = {t} must be positive")));
        }
        let n = grid.points_per_axis();
        let len = grid.len();
        let freq = grid.dual();
        let inv_weight = grid.freq_spacing();

        let rows: Vec<(usize, Vec<Complex64>)> = (0..len)
            .into_par_iter()
            .filter(|&k| self.fhat[k] != ZERO)
            .filter_map(|k| {
                let mut z = vec![0.0; 2 * dim];
                freq.point(k, &mut z[..dim]);
                for v in &mut z[..dim] {
                    *v *= t;
                }
                let mut buf = vec![ZERO; len];
                let mut any = false;
                let mut eta = vec![0.0; dim];
                for (l, out) in buf.iter_mut().enumerate() {
                    let gl = self.ghat[l];
                    if gl == ZERO {
                        continue;
                    }
                    freq.point(l, &mut eta);
                    for (d, e) in z[dim..].iter_mut().zip(&eta) {
                        *d = t * e;
                    }
                    let mv = m.eval(&z);
                    if mv != ZERO {
                        *out = mv * gl;
                        any = true;
                    }
                }
                if !any {
                    return None;
                }
                for axis in 0..dim {
                    transform_axis(&mut buf, n, dim, axis, false, inv_weight);
                }
                Some((k, buf))
            })
            .collect();

        let weight = inv_weight.powi(dim as i32);
        let values: Vec<Complex64> = (0..len)
            .into_par_iter()
            .map(|x| {
                let mut xi_idx = vec![0usize; dim];
                let mut x_idx = vec![0usize; dim];
                grid.unravel(x, &mut x_idx);
                let mut acc = ZERO;
                for (k, h) in &rows {
                    grid.unravel(*k, &mut xi_idx);
                    acc += self.fhat[*k] * self.phase(&x_idx, &xi_idx) * h[x];
                }
                acc * weight
            })
            .collect();
        Field::new(grid, values)
    }
}

pub fn apply_bilinear(m: &dyn Symbol, f: &Field, g: &Field, t: f64) -> Result<Field> {
    BilinearInputs::new(f, g)?.apply(m, t)
}

/// Pointwise sup over a dilation grid, with optional per-`t` fields.
#[derive(Debug, Clone)]
pub struct BilinearResult {
    pub symbol: String,
    pub t_values: Vec<f64>,
    pub per_t: Option<Vec<Field>>,
    /// `‖S_t(f,g)‖_{L¹}` for each `t`.
    pub per_t_l1: Vec<f64>,
    /// `max_t |S_t(f,g)|`, a lower bound for the sup over all `t > 0`.
    pub maximal: Field,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PerTRow {
    pub t: f64,
    pub l1: f64,
}

impl BilinearResult {
    pub fn rows(&self) -> Vec<PerTRow> {
        self.t_values.iter().zip(&self.per_t_l1).map(|(t, l1)| PerTRow { t: *t, l1: *l1 }).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,l1\n");
        for r in self.rows() {
            s.push_str(&format!("{:e},{:e}\n", r.t, r.l1));
        }
        s
    }
}

pub fn maximal_operator(
    m: &dyn Symbol,
    f: &Field,
    g: &Field,
    tg: &DilationGrid,
    keep_per_t: bool,
) -> Result<BilinearResult> {
    let inputs = BilinearInputs::new(f, g)?;
    maximal_with(&inputs, m, tg, keep_per_t)
}

/// [`maximal_operator`] on precomputed input transforms.
pub fn maximal_with(
    inputs: &BilinearInputs,
    m: &dyn Symbol,
    tg: &DilationGrid,
    keep_per_t: bool,
) -> Result<BilinearResult> {
    if tg.is_empty() {
        return Err(Error::InvalidParameter("empty dilation grid".into()));
    }
    let grid = *inputs.grid();
    let mut warnings = tg.aliasing_warnings(m.support(), &grid);
    warnings.push("sup over a finite t-grid is a lower bound for the sup over all t".into());
    let mut max = vec![0.0f64; grid.len()];
    let mut per_t = keep_per_t.then(Vec::new);
    let mut per_t_l1 = Vec::with_capacity(tg.len());
    for &t in tg.values() {
        let s = inputs.apply(m, t)?;
        for (acc, v) in max.iter_mut().zip(s.values()) {
            *acc = acc.max(v.norm());
        }
        per_t_l1.push(lp_norm(&s, 1.0)?);
        if let Some(p) = per_t.as_mut() {
            p.push(s);
        }
    }
    Ok(BilinearResult {
        symbol: m.name(),
        t_values: tg.values().to_vec(),
        per_t,
        per_t_l1,
        maximal: Field::new(grid, max.into_iter().map(|v| Complex64::new(v, 0.0)).collect())?,
        warnings,
    })
}
