//! Smooth radial partitions of unity.

use serde::{Deserialize, Serialize};

use crate::spectral::Support;

/// `C^∞` transition from 0 (t ≤ 0) to 1 (t ≥ 1).
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

pub fn smooth_step_derivative(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a * b * (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t))) / ((a + b) * (a + b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionKind {
    /// Dyadic annuli `|ζ| ≈ 2^j` around the origin.
    Hormander,
    /// Dyadic shells accumulating at the unit sphere.
    Riesz,
}

/// Radial partition `Σ_j ψ_j(ρ) = 1`.
///
/// Hörmander: `φ̂ = 1` on `[0,1]`, `0` past 2, `ψ_0 = φ̂(ρ/2)` and
/// `ψ_j = φ̂(2^{-j-1}ρ) - φ̂(2^{-j}ρ)` on `[2^j, 2^{j+2}]`.
///
/// Riesz: `Φ` rises on `[1/4, 1/2]`, `ψ(v) = Φ(v) - Φ(v/2)` lives on
/// `[1/4, 1]`, `ψ_0(ρ) = Φ(1-ρ)` and `ψ_j(ρ) = ψ(2^j(1-ρ))` on
/// `[1 - 2^{-j}, 1 - 2^{-j-2}]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicPartition {
    pub kind: PartitionKind,
}

impl DyadicPartition {
    pub fn hormander() -> Self {
        Self { kind: PartitionKind::Hormander }
    }

    pub fn riesz() -> Self {
        Self { kind: PartitionKind::Riesz }
    }

    /// `φ̂`: 1 on the unit ball, 0 outside radius 2.
    pub fn phi_hat(rho: f64) -> f64 {
        1.0 - smooth_step(rho - 1.0)
    }

    fn phi_hat_derivative(rho: f64) -> f64 {
        -smooth_step_derivative(rho - 1.0)
    }

    /// Riesz profile `Φ`: 0 below 1/4, 1 above 1/2.
    pub fn riesz_profile(u: f64) -> f64 {
        smooth_step(4.0 * (u - 0.25))
    }

    fn riesz_profile_derivative(u: f64) -> f64 {
        4.0 * smooth_step_derivative(4.0 * (u - 0.25))
    }

    /// `ψ_j(ρ)`.
    pub fn piece(&self, j: u32, rho: f64) -> f64 {
        match self.kind {
            PartitionKind::Hormander => {
                let s = 2f64.powi(-(j as i32));
                if j == 0 {
                    Self::phi_hat(0.5 * rho)
                } else {
                    Self::phi_hat(0.5 * s * rho) - Self::phi_hat(s * rho)
                }
            }
            PartitionKind::Riesz => {
                let u = 1.0 - rho;
                if j == 0 {
                    return Self::riesz_profile(u);
                }
                let v = 2f64.powi(j as i32) * u;
                Self::riesz_profile(v) - Self::riesz_profile(0.5 * v)
            }
        }
    }

    /// `ρ·ψ_j'(ρ)`.
    pub fn piece_radial_derivative(&self, j: u32, rho: f64) -> f64 {
        match self.kind {
            PartitionKind::Hormander => {
                let s = 2f64.powi(-(j as i32));
                if j == 0 {
                    0.5 * rho * Self::phi_hat_derivative(0.5 * rho)
                } else {
                    0.5 * s * rho * Self::phi_hat_derivative(0.5 * s * rho)
                        - s * rho * Self::phi_hat_derivative(s * rho)
                }
            }
            PartitionKind::Riesz => {
                let u = 1.0 - rho;
                if j == 0 {
                    return -rho * Self::riesz_profile_derivative(u);
                }
                let c = 2f64.powi(j as i32);
                let v = c * u;
                -rho * c * (Self::riesz_profile_derivative(v) - 0.5 * Self::riesz_profile_derivative(0.5 * v))
            }
        }
    }

    /// `Σ_{j ≤ J} ψ_j(ρ)` in closed form.
    pub fn partial_sum(&self, j_max: u32, rho: f64) -> f64 {
        match self.kind {
            PartitionKind::Hormander => Self::phi_hat(2f64.powi(-(j_max as i32) - 1) * rho),
            PartitionKind::Riesz => Self::riesz_profile(2f64.powi(j_max as i32) * (1.0 - rho)),
        }
    }

    /// Radius up to which the first `J + 1` pieces already sum to one.
    pub fn covered_radius(&self, j_max: u32) -> f64 {
        match self.kind {
            PartitionKind::Hormander => 2f64.powi(j_max as i32 + 1),
            PartitionKind::Riesz => 1.0 - 2f64.powi(-(j_max as i32) - 1),
        }
    }

    /// Declared support of `ψ_j`.
    pub fn support(&self, j: u32) -> Support {
        let p = 2f64.powi(j as i32);
        match (self.kind, j) {
            (PartitionKind::Hormander, 0) => Support::Ball { radius: 4.0 },
            (PartitionKind::Hormander, _) => Support::Annulus { inner: p, outer: 4.0 * p },
            (PartitionKind::Riesz, 0) => Support::Ball { radius: 0.75 },
            (PartitionKind::Riesz, _) => Support::Annulus { inner: 1.0 - 1.0 / p, outer: 1.0 - 0.25 / p },
        }
    }
}
