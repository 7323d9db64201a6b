use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use super::bessel::{bessel_j, bessel_ratio};
use crate::spectral::{norm, Support, Symbol};
use crate::{Error, Result};

/// Radius below which the Bessel symbol is evaluated from its series.
pub const BESSEL_SERIES_RADIUS: f64 = 1e-3;

/// `m_α(ζ) = J_ν(2π|ζ|)/|ζ|^ν` on `ℝ^{2n}`, `ν = n + α - 1`.
#[derive(Debug, Clone)]
pub struct BesselSymbol {
    pub n: usize,
    pub alpha: f64,
    /// Added to the Bessel order without touching the power of `|ζ|`;
    /// only the negative control of the identity check sets it.
    pub order_shift: f64,
}

impl BesselSymbol {
    pub fn order(&self) -> f64 {
        self.n as f64 + self.alpha - 1.0
    }

    /// `π^ν/Γ(ν + 1)`, the value at the origin.
    pub fn origin_value(&self) -> f64 {
        let nu = self.order();
        PI.powf(nu) / gamma(nu + 1.0)
    }

    fn ratio(&self, mu: f64, z: f64) -> f64 {
        bessel_ratio(mu, z, 2.0 * PI * BESSEL_SERIES_RADIUS).unwrap_or(f64::NAN)
    }

    /// Radial profile `m(ρ)`.
    pub fn profile(&self, rho: f64) -> f64 {
        let nu = self.order();
        let z = 2.0 * PI * rho;
        if self.order_shift != 0.0 {
            let mu = nu + self.order_shift;
            return bessel_j(mu, z).unwrap_or(f64::NAN) / rho.powf(nu);
        }
        (2.0 * PI).powf(nu) * self.ratio(nu, z)
    }
}

pub fn m_alpha_symbol(n: usize, alpha: f64) -> Result<BesselSymbol> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let nu = n as f64 + alpha - 1.0;
    if !(nu >= 0.0) {
        return Err(Error::UnsupportedOrder(format!("Bessel order n + α - 1 = {nu} is negative")));
    }
    Ok(BesselSymbol { n, alpha, order_shift: 0.0 })
}

impl Symbol for BesselSymbol {
    fn dim(&self) -> usize {
        2 * self.n
    }
    fn eval(&self, z: &[f64]) -> Complex64 {
        Complex64::new(self.profile(norm(z)), 0.0)
    }
    /// `ρ m'(ρ) = -(2π)^ν z² J_{ν+1}(z)/z^{ν+1}` with `z = 2πρ`.
    fn radial_derivative(&self, z: &[f64]) -> Complex64 {
        let nu = self.order();
        let x = 2.0 * PI * norm(z);
        Complex64::new(-(2.0 * PI).powf(nu) * x * x * self.ratio(nu + 1.0, x), 0.0)
    }
    fn decay_exponent(&self) -> Option<f64> {
        Some(self.n as f64 + self.alpha - 0.5)
    }
    fn name(&self) -> String {
        format!("bessel(n={}, alpha={})", self.n, self.alpha)
    }
}

/// `m^λ(ζ) = (1 - |ζ|²)_+^λ` on `ℝ^{2n}`.
#[derive(Debug, Clone)]
pub struct BochnerRiesz {
    pub n: usize,
    pub lambda: f64,
}

pub fn bochner_riesz_symbol(n: usize, lambda: f64) -> Result<BochnerRiesz> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("λ must be positive, got {lambda}")));
    }
    Ok(BochnerRiesz { n, lambda })
}

impl BochnerRiesz {
    pub fn profile(&self, rho: f64) -> f64 {
        if rho >= 1.0 {
            0.0
        } else {
            (1.0 - rho * rho).powf(self.lambda)
        }
    }

    /// `ρ·d/dρ (1 - ρ²)^λ`.
    pub fn profile_radial_derivative(&self, rho: f64) -> f64 {
        if rho >= 1.0 {
            0.0
        } else {
            -2.0 * self.lambda * rho * rho * (1.0 - rho * rho).powf(self.lambda - 1.0)
        }
    }
}

impl Symbol for BochnerRiesz {
    fn dim(&self) -> usize {
        2 * self.n
    }
    fn eval(&self, z: &[f64]) -> Complex64 {
        Complex64::new(self.profile(norm(z)), 0.0)
    }
    fn support(&self) -> Support {
        Support::Ball { radius: 1.0 }
    }
    fn radial_derivative(&self, z: &[f64]) -> Complex64 {
        Complex64::new(self.profile_radial_derivative(norm(z)), 0.0)
    }
    fn name(&self) -> String {
        format!("bochner_riesz(n={}, lambda={})", self.n, self.lambda)
    }
}

/// `exp(1 - 1/(1 - |ζ/R|²))` inside the ball of radius `R`, zero outside.
#[derive(Debug, Clone)]
pub struct Bump {
    pub dim: usize,
    pub radius: f64,
}

pub fn bump_symbol(dim: usize, radius: f64) -> Result<Bump> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!("bump radius must be positive, got {radius}")));
    }
    Ok(Bump { dim, radius })
}

impl Bump {
    pub fn profile(&self, rho: f64) -> f64 {
        let u = rho / self.radius;
        if u >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - u * u)).exp()
        }
    }
}

impl Symbol for Bump {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, z: &[f64]) -> Complex64 {
        Complex64::new(self.profile(norm(z)), 0.0)
    }
    fn support(&self) -> Support {
        Support::Ball { radius: self.radius }
    }
    fn radial_derivative(&self, z: &[f64]) -> Complex64 {
        let u = norm(z) / self.radius;
        if u >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let d = 1.0 - u * u;
        Complex64::new(-2.0 * u * u / (d * d) * self.profile(norm(z)), 0.0)
    }
    fn name(&self) -> String {
        format!("bump(radius={})", self.radius)
    }
}
