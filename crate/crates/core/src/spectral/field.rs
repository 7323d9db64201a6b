use num_complex::Complex64;
use rayon::prelude::*;

use super::Grid;
use crate::{Error, Result};

/// Complex samples on a [`Grid`], row-major with axis 0 slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!("expected {} samples, got {}", grid.len(), values.len())));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn constant(grid: Grid, c: Complex64) -> Self {
        Self { grid, values: vec![c; grid.len()] }
    }

    /// Sample `f` at every node. Evaluation runs in parallel over rows.
    pub fn from_fn<F>(grid: Grid, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let n = grid.points_per_axis();
        let dim = grid.dim();
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        values.par_chunks_mut(n).enumerate().for_each(|(row, chunk)| {
            let mut x = vec![0.0; dim];
            grid.point(row * n, &mut x);
            for (i, v) in chunk.iter_mut().enumerate() {
                x[dim - 1] = grid.coord(i);
                *v = f(&x);
            }
        });
        Self { grid, values }
    }

    /// Real-valued convenience wrapper around [`Field::from_fn`].
    pub fn from_real_fn<F>(grid: Grid, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64 + Sync) -> Field {
        Field { grid: self.grid, values: self.values.par_iter().map(|&v| f(v)).collect() }
    }

    pub fn scale(&self, c: Complex64) -> Field {
        self.map(|v| v * c)
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &Field, f: impl Fn(Complex64, Complex64) -> Complex64 + Sync) -> Result<Field> {
        self.check_same_grid(other)?;
        let values = self.values.par_iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Field { grid: self.grid, values })
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.im.abs()))
    }

    /// `max |self - other| / max |other|` (absolute when `other` vanishes).
    pub fn rel_sup_diff(&self, other: &Field) -> Result<f64> {
        self.check_same_grid(other)?;
        let num = self.values.iter().zip(&other.values).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        let den = other.max_abs();
        Ok(if den > 0.0 { num / den } else { num })
    }

    pub fn check_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid.compatible(&other.grid) {
            Ok(())
        } else {
            Err(Error::InvalidGrid(format!("grid mismatch: {:?} vs {:?}", self.grid, other.grid)))
        }
    }

    /// Largest modulus on the outer face (any axis index 0) relative to the
    /// global maximum.
    pub fn boundary_level(&self) -> f64 {
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let mut idx = vec![0; self.grid.dim()];
        let mut worst = 0.0f64;
        for (flat, v) in self.values.iter().enumerate() {
            self.grid.unravel(flat, &mut idx);
            if idx.contains(&0) {
                worst = worst.max(v.norm());
            }
        }
        worst / peak
    }

    /// Periodization precondition: the field must have decayed below `tol`
    /// (relative) on the boundary.
    pub fn check_boundary_decay(&self, tol: f64) -> Result<()> {
        let level = self.boundary_level();
        if level < tol {
            Ok(())
        } else {
            Err(Error::Resolution(format!("field reaches {level:.3e} of its peak on the boundary (limit {tol:.1e})")))
        }
    }
}
