//! Bessel functions of the first kind for real order.

use std::f64::consts::PI;
use std::sync::OnceLock;

use statrs::function::gamma::gamma;

use crate::quad::GaussLegendre;
use crate::{Error, Result};

const SERIES_LIMIT: f64 = 12.0;

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

/// `J_ν(z)` for `ν ≥ 0`, `z ≥ 0`.
pub fn bessel_j(nu: f64, z: f64) -> Result<f64> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("order must be a finite non-negative number, got {nu}")));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("argument must be finite and non-negative, got {z}")));
    }
    Ok(if z <= SERIES_LIMIT { series(nu, z) } else { integral(nu, z) })
}

/// Ascending series; adequate up to `z ≈ 12` in double precision.
fn series(nu: f64, z: f64) -> f64 {
    if z == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let q = -0.25 * z * z;
    let mut term = (0.5 * z).powf(nu) / gamma(nu + 1.0);
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && kf > 0.5 * z {
            break;
        }
    }
    sum
}

/// `(1/π)∫₀^π cos(νθ - z sin θ)dθ - (sin νπ/π)∫₀^∞ e^{-νt - z sinh t}dt`.
fn integral(nu: f64, z: f64) -> f64 {
    let gl = rule();
    let panels = ((z + nu) / 4.0).ceil() as usize + 4;
    let first = gl.integrate_composite(0.0, PI, panels, |th| (nu * th - z * th.sin()).cos()) / PI;
    if nu.fract() == 0.0 {
        return first;
    }
    // beyond T the integrand is below e^{-50}
    let t_max = (50.0 / z).asinh();
    let second = gl.integrate_composite(0.0, t_max, 16, |t| (-nu * t - z * t.sinh()).exp());
    first - (nu * PI).sin() / PI * second
}

/// `J_μ(z)/z^μ` by its even power series, good for small `z`.
pub fn bessel_ratio_series(mu: f64, z: f64, terms: usize) -> f64 {
    let q = -0.25 * z * z;
    let mut term = 1.0 / (2f64.powf(mu) * gamma(mu + 1.0));
    let mut sum = term;
    for k in 1..terms {
        let kf = k as f64;
        term *= q / (kf * (kf + mu));
        sum += term;
    }
    sum
}

/// `J_μ(z)/z^μ`, switching to the series below `z_switch`.
pub fn bessel_ratio(mu: f64, z: f64, z_switch: f64) -> Result<f64> {
    if z < z_switch {
        if !(mu >= 0.0) {
            return Err(Error::Domain(format!("order must be non-negative, got {mu}")));
        }
        return Ok(bessel_ratio_series(mu, z, 12));
    }
    Ok(bessel_j(mu, z)? / z.powf(mu))
}
