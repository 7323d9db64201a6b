use num_complex::Complex64;

use super::bilinear::BilinearInputs;
use super::dilation::DilationGrid;
use crate::spectral::{Field, Support, Symbol};
use crate::{Error, Result};

/// Boundary cells may carry at most this share of a g-function integral.
pub const TRUNCATION_TOL: f64 = 1e-6;

/// `ζ·∇m(ζ)` of a borrowed symbol.
#[derive(Debug)]
struct Tilde<'a>(&'a dyn Symbol);

impl Symbol for Tilde<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, z: &[f64]) -> Complex64 {
        self.0.radial_derivative(z)
    }
    fn support(&self) -> Support {
        self.0.support()
    }
    fn name(&self) -> String {
        format!("tilde({})", self.0.name())
    }
}

/// The operator with symbol `(tξ,tη)·∇m(tξ,tη)`.
pub fn tilde_operator(m: &dyn Symbol, f: &Field, g: &Field, t: f64) -> Result<Field> {
    BilinearInputs::new(f, g)?.apply(&Tilde(m), t)
}

impl BilinearInputs {
    pub fn apply_tilde(&self, m: &dyn Symbol, t: f64) -> Result<Field> {
        self.apply(&Tilde(m), t)
    }

    /// `∫_{s_min}^t B̃_s ds/s` by the midpoint rule with `count` cells in `log s`.
    pub fn ftc_integral(&self, m: &dyn Symbol, s_min: f64, t: f64, count: usize) -> Result<Field> {
        let sg = DilationGrid::midpoints(s_min, t, count)?;
        let mut acc = vec![Complex64::new(0.0, 0.0); self.grid().len()];
        for &s in sg.values() {
            let b = self.apply_tilde(m, s)?;
            for (a, v) in acc.iter_mut().zip(b.values()) {
                *a += v * sg.log_step;
            }
        }
        Field::new(*self.grid(), acc)
    }
}

/// `(∫ |B_s|² ds/s)^{1/2}` and its tilde analogue on one s-grid, plus
/// `sup_s |B_s|` over the same grid.
#[derive(Debug, Clone)]
pub struct SquareFunctions {
    pub g: Field,
    pub g_tilde: Field,
    pub sup: Field,
    /// Share of `∫|B_s|²` carried by the two end cells.
    pub boundary_fraction: f64,
    pub warnings: Vec<String>,
}

fn real_field(grid: crate::spectral::Grid, v: Vec<f64>) -> Result<Field> {
    Field::new(grid, v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
}

pub fn square_functions(inputs: &BilinearInputs, m: &dyn Symbol, sg: &DilationGrid) -> Result<SquareFunctions> {
    if sg.is_empty() || !(sg.log_step > 0.0) {
        return Err(Error::InvalidParameter("g-functions need a midpoint s-grid".into()));
    }
    let len = inputs.grid().len();
    let (mut g2, mut gt2, mut sup) = (vec![0.0; len], vec![0.0; len], vec![0.0f64; len]);
    let mut ends = 0.0;
    let last = sg.len() - 1;
    for (i, &s) in sg.values().iter().enumerate() {
        let b = inputs.apply(m, s)?;
        let bt = inputs.apply_tilde(m, s)?;
        let mut cell = 0.0;
        for x in 0..len {
            let v = b.values()[x].norm();
            g2[x] += v * v * sg.log_step;
            cell += v * v * sg.log_step;
            gt2[x] += bt.values()[x].norm_sqr() * sg.log_step;
            sup[x] = sup[x].max(v);
        }
        if i == 0 || i == last {
            ends += cell;
        }
    }
    let total: f64 = g2.iter().sum();
    let boundary_fraction = if total > 0.0 { ends / total } else { 0.0 };
    let mut warnings = Vec::new();
    if boundary_fraction > TRUNCATION_TOL {
        warnings.push(format!("s-range truncation: end cells carry {boundary_fraction:.2e} of the integral"));
    }
    let grid = *inputs.grid();
    Ok(SquareFunctions {
        g: real_field(grid, g2.into_iter().map(f64::sqrt).collect())?,
        g_tilde: real_field(grid, gt2.into_iter().map(f64::sqrt).collect())?,
        sup: real_field(grid, sup)?,
        boundary_fraction,
        warnings,
    })
}

/// `G(f,g)(x) = (∫ |B_s(f,g)(x)|² ds/s)^{1/2}` over `sg`.
pub fn g_function(m: &dyn Symbol, f: &Field, g: &Field, sg: &DilationGrid) -> Result<(Field, Vec<String>)> {
    let inputs = BilinearInputs::new(f, g)?;
    if sg.is_empty() || !(sg.log_step > 0.0) {
        return Err(Error::InvalidParameter("g-functions need a midpoint s-grid".into()));
    }
    let len = inputs.grid().len();
    let mut g2 = vec![0.0; len];
    let mut ends = 0.0;
    let last = sg.len() - 1;
    for (i, &s) in sg.values().iter().enumerate() {
        let b = inputs.apply(m, s)?;
        let mut cell = 0.0;
        for (acc, v) in g2.iter_mut().zip(b.values()) {
            let w = v.norm_sqr() * sg.log_step;
            *acc += w;
            cell += w;
        }
        if i == 0 || i == last {
            ends += cell;
        }
    }
    let total: f64 = g2.iter().sum();
    let mut warnings = Vec::new();
    if total > 0.0 && ends / total > TRUNCATION_TOL {
        warnings.push(format!("s-range truncation: end cells carry {:.2e} of the integral", ends / total));
    }
    Ok((real_field(*inputs.grid(), g2.into_iter().map(f64::sqrt).collect())?, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Constant, FnSymbol, Grid};
    use std::f64::consts::PI;

    fn inputs() -> (Field, Field) {
        let grid = Grid::new(1, 64, 16.0).unwrap();
        let f = Field::from_fn(grid, |x| Complex64::from_polar((-PI * x[0] * x[0] / 2.0).exp(), 3.0 * x[0]));
        let g = Field::from_real_fn(grid, |x| (-PI * (x[0] - 1.0).powi(2)).exp());
        (f, g)
    }

    #[test]
    fn constant_symbol_has_zero_tilde() {
        let (f, g) = inputs();
        let out = tilde_operator(&Constant::one(2), &f, &g, 1.0).unwrap();
        assert_eq!(out.max_abs(), 0.0);
    }

    #[test]
    fn euler_identity_for_quadratic_symbol() {
        let (f, g) = inputs();
        let m = FnSymbol::new(2, "rho2", |z| Complex64::new(z[0] * z[0] + z[1] * z[1], 0.0));
        let tilde = tilde_operator(&m, &f, &g, 0.6).unwrap();
        let plain = BilinearInputs::new(&f, &g).unwrap().apply(&m, 0.6).unwrap();
        let twice = plain.scale(Complex64::new(2.0, 0.0));
        assert!(tilde.sub(&twice).unwrap().max_abs() <= 1e-8 * twice.max_abs());
    }

    #[test]
    fn zero_input_gives_zero_g() {
        let (f, _) = inputs();
        let zero = Field::zeros(*f.grid());
        let sg = DilationGrid::midpoints(0.1, 10.0, 16).unwrap();
        let m = FnSymbol::new(2, "bump", |z| {
            let r = (z[0] * z[0] + z[1] * z[1]).sqrt();
            Complex64::new(if (1.0..2.0).contains(&r) { (r - 1.0) * (2.0 - r) } else { 0.0 }, 0.0)
        });
        let (gf, _) = g_function(&m, &f, &zero, &sg).unwrap();
        assert_eq!(gf.max_abs(), 0.0);
    }
}
