use std::f64::consts::PI;

use statrs::function::gamma::{gamma, ln_gamma};

use crate::quad::GaussLegendre;
use crate::spectral::Symbol;
use crate::zoo::PieceFlavor;
use crate::{Error, Result};

/// Surface area of the unit sphere in `ℝ^dim`.
pub fn sphere_area(dim: usize) -> f64 {
    2.0 * PI.powf(0.5 * dim as f64) / gamma(0.5 * dim as f64)
}

/// `‖m‖_{L^p(ℝ^dim)}` of a radial symbol by Gauss-Legendre quadrature of
/// `|S^{dim-1}| ∫ |m(ρe₁)|^p ρ^{dim-1} dρ` over `[inner, outer]`.
pub fn radial_lp_norm(m: &dyn Symbol, p: f64, panels: usize) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("radial norm needs finite p ≥ 1, got {p}")));
    }
    let support = m.support();
    let outer =
        support.outer_radius().ok_or_else(|| Error::InvalidParameter("radial norm needs a bounded support".into()))?;
    let dim = m.dim();
    let mut e = vec![0.0; dim];
    let gl = GaussLegendre::new(32);
    let integral = gl.integrate_composite(support.inner_radius(), outer, panels, |rho| {
        e[0] = rho;
        m.eval(&e).norm().powf(p) * rho.powi(dim as i32 - 1)
    });
    Ok((sphere_area(dim) * integral).powf(1.0 / p))
}

/// `∫₀¹ (1-ρ²)^{2λ} ρ^{2n-1} dρ = Γ(n)Γ(2λ+1) / (2Γ(n+2λ+1))`.
pub fn bochner_riesz_radial_integral(n: usize, lambda: f64) -> f64 {
    let n = n as f64;
    0.5 * (ln_gamma(n) + ln_gamma(2.0 * lambda + 1.0) - ln_gamma(n + 2.0 * lambda + 1.0)).exp()
}

/// Expected `log₂`-slope in `j` of `‖m_j‖_{L^p}` for Bochner-Riesz pieces:
/// height `2^{-jλ}` on a shell of width `2^{-j}`, or of radius `2^j` and unit
/// width once rescaled.
pub fn piece_norm_slope(flavor: PieceFlavor, lambda: f64, n: usize, p: f64) -> Result<f64> {
    match flavor {
        PieceFlavor::Riesz => Ok(-lambda - 1.0 / p),
        PieceFlavor::RieszRescaled => Ok(-lambda + (2 * n - 1) as f64 / p),
        PieceFlavor::Hormander => {
            Err(Error::InvalidParameter("no piece-norm prediction for the Hörmander partition".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{bochner_riesz_symbol, bump_symbol};

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-12);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn bochner_riesz_norm_matches_closed_form() {
        for (n, lambda) in [(1, 2.0), (1, 3.0), (2, 1.5)] {
            let m = bochner_riesz_symbol(n, lambda).unwrap();
            let quad = radial_lp_norm(&m, 2.0, 64).unwrap().powi(2);
            let exact = sphere_area(2 * n) * bochner_riesz_radial_integral(n, lambda);
            assert!((quad - exact).abs() < 1e-12 * exact, "{n} {lambda}: {quad} {exact}");
        }
        // n = 1: 1/(2(2λ+1))
        assert!((bochner_riesz_radial_integral(1, 2.0) - 0.1).abs() < 1e-14);
    }

    #[test]
    fn homogeneous_in_the_radius() {
        let a = radial_lp_norm(&bump_symbol(2, 1.0).unwrap(), 3.0, 32).unwrap();
        let b = radial_lp_norm(&bump_symbol(2, 2.0).unwrap(), 3.0, 32).unwrap();
        assert!((b / a - 2f64.powf(2.0 / 3.0)).abs() < 1e-10);
    }
}
