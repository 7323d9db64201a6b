use std::f64::consts::PI;

use serde::Serialize;

use crate::zoo::BesselSymbol;
use crate::{Error, Result};

/// Trapezoid nodes on the circle.
pub const CIRCLE_NODES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BesselIdentityReport {
    /// `σ̂(r) / m_0(r)` at `r = 1`, with `σ` arc length on `S¹`.
    pub constant: f64,
    pub max_deviation: f64,
    pub worst_radius: f64,
    pub order_shift: f64,
    pub radii: Vec<f64>,
}

/// `∮_{S¹} e^{-2πi r θ₁} dσ(θ)` by the trapezoid rule.
pub fn circle_transform(r: f64, nodes: usize) -> f64 {
    let w = 2.0 * PI / nodes as f64;
    (0..nodes).map(|k| (2.0 * PI * r * (k as f64 * w).cos()).cos()).sum::<f64>() * w
}

/// Compare the `n = 1`, `α = 0` Bessel profile with the transform of arc
/// length on the circle after fixing one constant at `r = 1`.
/// `order_shift` perturbs the Bessel order for a negative control.
pub fn bessel_identity_check(radii: &[f64], order_shift: f64) -> Result<BesselIdentityReport> {
    if radii.is_empty() || radii.iter().any(|r| !(*r >= 0.0)) {
        return Err(Error::InvalidParameter("radii must be non-negative and nonempty".into()));
    }
    let m = BesselSymbol { n: 1, alpha: 0.0, order_shift };
    let constant = circle_transform(1.0, CIRCLE_NODES) / m.profile(1.0);
    let (mut max_deviation, mut worst_radius) = (0.0f64, radii[0]);
    for &r in radii {
        let d = (circle_transform(r, CIRCLE_NODES) - constant * m.profile(r)).abs();
        if d > max_deviation || d.is_nan() {
            max_deviation = d;
            worst_radius = r;
        }
    }
    Ok(BesselIdentityReport { constant, max_deviation, worst_radius, order_shift, radii: radii.to_vec() })
}
