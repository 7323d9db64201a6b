use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform centered grid on `[-L/2, L/2)^dim` with `N` points per axis.
///
/// Storage index `i` on an axis sits at `x_i = -L/2 + i·h`, so the origin is
/// index `N/2`. The dual grid carries the frequencies `(k - N/2)/L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    n: usize,
    extent: f64,
}

impl Grid {
    pub fn new(dim: usize, n: usize, extent: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGrid("dimension must be positive".into()));
        }
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("points per axis must be a positive even integer, got {n}")));
        }
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::InvalidGrid(format!("extent must be positive, got {extent}")));
        }
        if n.checked_pow(dim as u32).is_none() {
            return Err(Error::InvalidGrid(format!("{n}^{dim} points overflow")));
        }
        Ok(Self { dim, n, extent })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `h = L/N`.
    pub fn spacing(&self) -> f64 {
        self.extent / self.n as f64
    }

    /// `1/L`.
    pub fn freq_spacing(&self) -> f64 {
        1.0 / self.extent
    }

    /// `N/(2L)`.
    pub fn nyquist(&self) -> f64 {
        self.n as f64 / (2.0 * self.extent)
    }

    /// Coordinate of storage index `i` along any axis.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.spacing()
    }

    /// Frequency of storage index `k` on the dual grid.
    #[inline]
    pub fn freq(&self, k: usize) -> f64 {
        (k as f64 - (self.n / 2) as f64) / self.extent
    }

    /// All axis coordinates, in storage order.
    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coord(i)).collect()
    }

    /// The grid on which transforms of fields on `self` live.
    pub fn dual(&self) -> Grid {
        Grid { dim: self.dim, n: self.n, extent: self.n as f64 / self.extent }
    }

    /// Same spacing and size up to rounding.
    pub fn compatible(&self, other: &Grid) -> bool {
        self.dim == other.dim
            && self.n == other.n
            && ((self.extent - other.extent).abs() <= 1e-12 * self.extent.max(other.extent))
    }

    /// Multi-index of a flat row-major offset (axis 0 slowest).
    pub fn unravel(&self, mut flat: usize, out: &mut [usize]) {
        for a in (0..self.dim).rev() {
            out[a] = flat % self.n;
            flat /= self.n;
        }
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    /// Point coordinates of a flat offset.
    pub fn point(&self, flat: usize, out: &mut [f64]) {
        let mut rest = flat;
        for a in (0..self.dim).rev() {
            out[a] = self.coord(rest % self.n);
            rest /= self.n;
        }
    }

    /// Same resolution, different dimension.
    pub fn with_dim(&self, dim: usize) -> Result<Grid> {
        Grid::new(dim, self.n, self.extent)
    }

    /// Storage index of the node nearest to `x`, if `x` lies on the grid.
    pub fn nearest_index(&self, x: f64) -> Option<usize> {
        let i = (x / self.spacing()).round() as i64 + (self.n / 2) as i64;
        (0..self.n as i64).contains(&i).then_some(i as usize)
    }
}
