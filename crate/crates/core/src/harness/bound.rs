use crate::wavelet::WaveletSystem;
use crate::{Error, Result};

/// `C(j, γ)` of the diagonal estimate, modulo its unspecified constant:
/// `n(j+γ) 2^{-j(λ-1)} 2^{γ(1+n/2-s)}` at `r = 4`, and
/// `2^{-j(λ-1)} 2^{γ(1+2n/r-s)}` for `1 < r < 4`.
pub fn predicted_bound_c(j: u32, gamma: u32, lambda: f64, r: f64, s: f64, n: usize) -> Result<f64> {
    let (jf, gf, nf) = (j as f64, gamma as f64, n as f64);
    if r == 4.0 {
        Ok(nf * (jf + gf) * 2f64.powf(-jf * (lambda - 1.0)) * 2f64.powf(gf * (1.0 + nf / 2.0 - s)))
    } else if r > 1.0 && r < 4.0 {
        Ok(2f64.powf(-jf * (lambda - 1.0)) * 2f64.powf(gf * (1.0 + 2.0 * nf / r - s)))
    } else {
        Err(Error::InvalidParameter(format!("r = {r} outside (1, 4]")))
    }
}

/// Comparison curve `2^{-j(λ-1-ε)}` for the sum over `γ`.
pub fn summed_bound(j: u32, lambda: f64, epsilon: f64) -> f64 {
    2f64.powf(-(j as f64) * (lambda - 1.0 - epsilon))
}

/// Effective `C` in `E = {C2^{-γ} ≤ |ξ| ≤ 2^j}`: one over the support
/// diameter of a level-0 tensor wavelet in `n` variables.
pub fn band_constant(sys: &WaveletSystem, n: usize) -> f64 {
    1.0 / sys.support_diameter(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        assert_eq!(predicted_bound_c(0, 0, 2.0, 4.0, 1.5, 1).unwrap(), 0.0);
        assert_eq!(predicted_bound_c(1, 0, 2.0, 2.0, 3.0, 1).unwrap(), 0.5);
        assert!(predicted_bound_c(1, 0, 2.0, 1.0, 3.0, 1).is_err());
        assert!(predicted_bound_c(1, 0, 2.0, 4.5, 3.0, 1).is_err());
        let mut prev = f64::INFINITY;
        for j in 0..10 {
            let c = predicted_bound_c(j, 2, 2.5, 3.0, 3.0, 1).unwrap();
            assert!(c < prev);
            prev = c;
        }
    }

    #[test]
    fn band_constant_from_support() {
        let sys = WaveletSystem::build(2, 8).unwrap();
        assert!((band_constant(&sys, 1) - 0.2).abs() < 1e-15);
        assert!((band_constant(&sys, 4) - 0.1).abs() < 1e-15);
    }
}
