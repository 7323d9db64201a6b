use num_complex::Complex64;

use crate::spectral::{fft_forward, fft_inverse, Field};
use crate::Result;

/// `sup_ρ` of the average of `|f|` over the open periodic ball of radius
/// `ρ ∈ {h, 2h, ..., L/2}`; the radius-`h` ball is the point itself.
pub fn hl_maximal(f: &Field) -> Result<Field> {
    let grid = *f.grid();
    let h = grid.spacing();
    let abs: Vec<f64> = f.abs();
    let mut best = abs.clone();
    let abs_field = Field::new(grid, abs.iter().map(|v| Complex64::new(*v, 0.0)).collect())?;
    let abs_hat = fft_forward(&abs_field)?;
    let steps = grid.points_per_axis() / 2;
    for k in 2..=steps {
        let rho = k as f64 * h;
        let ball = Field::from_fn(grid, |x| {
            let inside = x.iter().map(|v| v * v).sum::<f64>() < rho * rho * (1.0 - 1e-12);
            Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0)
        });
        let count = ball.values().iter().filter(|v| v.re > 0.0).count();
        let ball_hat = fft_forward(&ball)?;
        let sums = fft_inverse(&abs_hat.mul(&ball_hat)?)?;
        // continuous convolution carries the quadrature weight h^dim
        let norm = 1.0 / (count as f64 * h.powi(grid.dim() as i32));
        for (b, s) in best.iter_mut().zip(sums.values()) {
            *b = b.max(s.re * norm);
        }
    }
    Field::new(grid, best.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn constant_field() {
        let grid = Grid::new(1, 64, 8.0).unwrap();
        let m = hl_maximal(&Field::constant(grid, Complex64::new(0.0, -2.5))).unwrap();
        assert!(m.values().iter().all(|v| (v.re - 2.5).abs() < 1e-12));
    }

    #[test]
    fn dominates_modulus() {
        let grid = Grid::new(2, 16, 4.0).unwrap();
        let f = Field::from_real_fn(grid, |x| (3.0 * x[0]).sin() * x[1]);
        let m = hl_maximal(&f).unwrap();
        for (a, b) in m.values().iter().zip(f.values()) {
            assert!(a.re >= b.norm());
        }
    }
}
