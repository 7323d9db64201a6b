use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Field, Grid};
use crate::{Error, Result};

/// Radial footprint of a symbol, used for resolution checks and for
/// skipping work outside the support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Support {
    Unbounded,
    Ball { radius: f64 },
    Annulus { inner: f64, outer: f64 },
}

impl Support {
    pub fn outer_radius(&self) -> Option<f64> {
        match *self {
            Support::Unbounded => None,
            Support::Ball { radius } => Some(radius),
            Support::Annulus { outer, .. } => Some(outer),
        }
    }

    pub fn inner_radius(&self) -> f64 {
        match *self {
            Support::Annulus { inner, .. } => inner,
            _ => 0.0,
        }
    }

    /// Radial width of the region the symbol lives on.
    pub fn width(&self) -> Option<f64> {
        match *self {
            Support::Unbounded => None,
            Support::Ball { radius } => Some(2.0 * radius),
            Support::Annulus { inner, outer } => Some(outer - inner),
        }
    }

    pub fn contains_radius(&self, rho: f64) -> bool {
        match *self {
            Support::Unbounded => true,
            Support::Ball { radius } => rho <= radius,
            Support::Annulus { inner, outer } => rho >= inner && rho <= outer,
        }
    }

    pub fn scaled(&self, factor: f64) -> Support {
        match *self {
            Support::Unbounded => Support::Unbounded,
            Support::Ball { radius } => Support::Ball { radius: radius * factor },
            Support::Annulus { inner, outer } => Support::Annulus { inner: inner * factor, outer: outer * factor },
        }
    }
}

/// A multiplier on `ℝ^dim` given by a pure evaluator.
pub trait Symbol: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;

    fn eval(&self, z: &[f64]) -> Complex64;

    fn support(&self) -> Support {
        Support::Unbounded
    }

    /// `ζ·∇m(ζ)`. The default differentiates `ε ↦ m((1+ε)ζ)` by central
    /// differences; symbols with closed forms override it.
    fn radial_derivative(&self, z: &[f64]) -> Complex64 {
        const STEP: f64 = 1e-5;
        let up: Vec<f64> = z.iter().map(|v| v * (1.0 + STEP)).collect();
        let dn: Vec<f64> = z.iter().map(|v| v * (1.0 - STEP)).collect();
        (self.eval(&up) - self.eval(&dn)) / (2.0 * STEP)
    }

    /// Known pointwise decay order `a` in `|m(ζ)| ≲ |ζ|^{-a}`.
    fn decay_exponent(&self) -> Option<f64> {
        None
    }

    fn name(&self) -> String;
}

pub type SymbolRef = Arc<dyn Symbol>;

pub fn norm(z: &[f64]) -> f64 {
    z.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Samples of `m` at the nodes of `grid`.
pub fn sample(m: &dyn Symbol, grid: &Grid) -> Result<Field> {
    if m.dim() != grid.dim() {
        return Err(Error::InvalidGrid(format!(
            "symbol of dimension {} sampled on a {}-dimensional grid",
            m.dim(),
            grid.dim()
        )));
    }
    Ok(Field::from_fn(*grid, |z| m.eval(z)))
}

/// A symbol together with cached samples on one grid.
#[derive(Debug, Clone)]
pub struct SampledSymbol {
    pub symbol: SymbolRef,
    pub samples: Field,
}

impl SampledSymbol {
    pub fn new(symbol: SymbolRef, grid: &Grid) -> Result<Self> {
        let samples = sample(symbol.as_ref(), grid)?;
        Ok(Self { symbol, samples })
    }

    /// Largest relative deviation between the cache and the evaluator.
    pub fn cache_deviation(&self) -> f64 {
        let g = self.samples.grid();
        let mut x = vec![0.0; g.dim()];
        let mut worst = 0.0f64;
        for (flat, v) in self.samples.values().iter().enumerate() {
            g.point(flat, &mut x);
            let e = self.symbol.eval(&x);
            let diff = (v - e).norm();
            if diff > 0.0 {
                worst = worst.max(diff / e.norm().max(f64::MIN_POSITIVE));
            }
        }
        worst
    }
}

/// `m ≡ c`.
#[derive(Debug, Clone)]
pub struct Constant {
    pub dim: usize,
    pub value: Complex64,
}

impl Constant {
    pub fn one(dim: usize) -> Self {
        Self { dim, value: Complex64::new(1.0, 0.0) }
    }
}

impl Symbol for Constant {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, _: &[f64]) -> Complex64 {
        self.value
    }
    fn radial_derivative(&self, _: &[f64]) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn name(&self) -> String {
        format!("constant({})", self.value.re)
    }
}

/// `e^{-π|ζ|²/w²}`.
#[derive(Debug, Clone)]
pub struct Gaussian {
    pub dim: usize,
    pub width: f64,
}

impl Symbol for Gaussian {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, z: &[f64]) -> Complex64 {
        let r2 = z.iter().map(|v| v * v).sum::<f64>() / (self.width * self.width);
        Complex64::new((-std::f64::consts::PI * r2).exp(), 0.0)
    }
    fn radial_derivative(&self, z: &[f64]) -> Complex64 {
        let r2 = z.iter().map(|v| v * v).sum::<f64>() / (self.width * self.width);
        Complex64::new(-2.0 * std::f64::consts::PI * r2 * (-std::f64::consts::PI * r2).exp(), 0.0)
    }
    fn name(&self) -> String {
        format!("gaussian(w={})", self.width)
    }
}

type Evaluator = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// User-supplied evaluator.
#[derive(Clone)]
pub struct FnSymbol {
    dim: usize,
    label: String,
    support: Support,
    f: Evaluator,
    radial: Option<Evaluator>,
}

impl FnSymbol {
    pub fn new(dim: usize, label: impl Into<String>, f: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static) -> Self {
        Self { dim, label: label.into(), support: Support::Unbounded, f: Arc::new(f), radial: None }
    }

    pub fn with_support(mut self, support: Support) -> Self {
        self.support = support;
        self
    }

    pub fn with_radial_derivative(mut self, d: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static) -> Self {
        self.radial = Some(Arc::new(d));
        self
    }
}

impl fmt::Debug for FnSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnSymbol").field("dim", &self.dim).field("label", &self.label).finish()
    }
}

impl Symbol for FnSymbol {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, z: &[f64]) -> Complex64 {
        (self.f)(z)
    }
    fn support(&self) -> Support {
        self.support
    }
    fn radial_derivative(&self, z: &[f64]) -> Complex64 {
        match &self.radial {
            Some(d) => d(z),
            None => {
                const STEP: f64 = 1e-5;
                let up: Vec<f64> = z.iter().map(|v| v * (1.0 + STEP)).collect();
                let dn: Vec<f64> = z.iter().map(|v| v * (1.0 - STEP)).collect();
                ((self.f)(&up) - (self.f)(&dn)) / (2.0 * STEP)
            }
        }
    }
    fn name(&self) -> String {
        self.label.clone()
    }
}

/// `m(ξ, η) = m₁(ξ)·m₂(η)`.
#[derive(Debug, Clone)]
pub struct Separable {
    pub first: SymbolRef,
    pub second: SymbolRef,
}

impl Symbol for Separable {
    fn dim(&self) -> usize {
        self.first.dim() + self.second.dim()
    }
    fn eval(&self, z: &[f64]) -> Complex64 {
        let (a, b) = z.split_at(self.first.dim());
        self.first.eval(a) * self.second.eval(b)
    }
    fn name(&self) -> String {
        format!("{}⊗{}", self.first.name(), self.second.name())
    }
}

/// `ζ ↦ ζ·∇m(ζ)` as a symbol of its own.
#[derive(Debug, Clone)]
pub struct RadialDerivative {
    pub inner: SymbolRef,
}

impl Symbol for RadialDerivative {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, z: &[f64]) -> Complex64 {
        self.inner.radial_derivative(z)
    }
    fn support(&self) -> Support {
        self.inner.support()
    }
    fn name(&self) -> String {
        format!("radial_derivative({})", self.inner.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_splits_coordinates() {
        let m = Separable {
            first: Arc::new(FnSymbol::new(1, "x", |z| Complex64::new(z[0], 0.0))),
            second: Arc::new(FnSymbol::new(1, "y", |z| Complex64::new(z[0] + 1.0, 0.0))),
        };
        assert_eq!(m.eval(&[2.0, 3.0]).re, 8.0);
        assert_eq!(m.dim(), 2);
    }

    #[test]
    fn numeric_radial_derivative_matches_euler() {
        // |ζ|² is 2-homogeneous
        let m = FnSymbol::new(2, "r2", |z| Complex64::new(z[0] * z[0] + z[1] * z[1], 0.0));
        let d = m.radial_derivative(&[0.3, -0.4]);
        assert!((d.re - 2.0 * 0.25).abs() < 1e-9);
        assert_eq!(Constant::one(2).radial_derivative(&[1.0, 2.0]).norm(), 0.0);
    }

    #[test]
    fn gaussian_radial_derivative_closed_form() {
        let g = Gaussian { dim: 2, width: 1.3 };
        let z = [0.4, 0.7];
        let numeric = FnSymbol::new(2, "g", move |x| g.eval(x)).radial_derivative(&z);
        let g = Gaussian { dim: 2, width: 1.3 };
        assert!((g.radial_derivative(&z) - numeric).norm() < 1e-9);
    }

    #[test]
    fn sampled_cache_matches() {
        let grid = Grid::new(2, 16, 4.0).unwrap();
        let s = SampledSymbol::new(Arc::new(Gaussian { dim: 2, width: 1.0 }), &grid).unwrap();
        assert!(s.cache_deviation() < 1e-12);
        assert!(sample(&Gaussian { dim: 1, width: 1.0 }, &grid).is_err());
    }
}
