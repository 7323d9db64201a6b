use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::symbol::{sample, Support, Symbol};
use super::{fft_forward, fft_inverse, Field, Grid};
use crate::{Error, Result};

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!("exponent p must be ≥ 1, got {p}")));
    }
    Ok(())
}

/// Accumulate `Σ|v|^p` (or the max for `p = ∞`) row by row so the result
/// does not depend on how rayon splits the work.
fn power_sum(values: &[Complex64], row: usize, p: f64) -> f64 {
    let partial: Vec<f64> = values
        .par_chunks(row.max(1))
        .map(|c| {
            if p.is_infinite() {
                c.iter().fold(0.0f64, |m, v| m.max(v.norm()))
            } else if p == 2.0 {
                c.iter().map(|v| v.norm_sqr()).sum()
            } else {
                c.iter().map(|v| v.norm().powf(p)).sum()
            }
        })
        .collect();
    if p.is_infinite() {
        partial.into_iter().fold(0.0, f64::max)
    } else {
        partial.into_iter().sum()
    }
}

/// `(Σ |f|^p h^dim)^{1/p}`, or the max modulus for `p = ∞`.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    check_p(p)?;
    let g = f.grid();
    let s = power_sum(f.values(), g.points_per_axis(), p);
    if p.is_infinite() {
        return Ok(s);
    }
    let cell = g.spacing().powi(g.dim() as i32);
    Ok((s * cell).powf(1.0 / p))
}

/// Check that `grid` can represent a symbol with this support.
pub fn check_resolution(support: Support, grid: &Grid, min_samples: f64) -> Result<()> {
    if let Some(w) = support.width() {
        let across = w / grid.spacing();
        if across < min_samples {
            return Err(Error::Resolution(format!(
                "support of width {w:.3e} holds {across:.1} samples, need {min_samples}"
            )));
        }
    }
    if let Some(r) = support.outer_radius() {
        if r > 0.5 * grid.extent() {
            return Err(Error::Resolution(format!(
                "support radius {r} exceeds the grid half-width {}",
                0.5 * grid.extent()
            )));
        }
    }
    Ok(())
}

/// `‖(I - Δ)^{s/2} m‖_{L^r}` with `m` viewed as a function on `freq_grid`.
///
/// The Bessel potential is applied through a second transform, so `ζ` below
/// runs over the dual of `freq_grid`.
pub fn sobolev_norm(m: &dyn Symbol, freq_grid: &Grid, r: f64, s: f64) -> Result<f64> {
    if !(r > 1.0) {
        return Err(Error::InvalidParameter(format!("r must exceed 1, got {r}")));
    }
    if !(s >= 0.0) {
        return Err(Error::InvalidParameter(format!("smoothness must be ≥ 0, got {s}")));
    }
    check_resolution(m.support(), freq_grid, 8.0)?;
    let samples = sample(m, freq_grid)?;
    if s == 0.0 {
        return lp_norm(&samples, r);
    }
    bessel_potential_norm(&samples, r, s)
}

/// `‖(I - Δ)^{s/2} f‖_{L^r}` for an already sampled field.
pub fn bessel_potential_norm(f: &Field, r: f64, s: f64) -> Result<f64> {
    let mut hat = fft_forward(f)?;
    let dual = *hat.grid();
    let n = dual.points_per_axis();
    let dim = dual.dim();
    let weight: Vec<f64> = (0..n).map(|k| 4.0 * PI * PI * dual.coord(k).powi(2)).collect();
    hat.values_mut().par_chunks_mut(n).enumerate().for_each(|(row, chunk)| {
        let mut idx = vec![0; dim];
        dual.unravel(row * n, &mut idx);
        let base: f64 = idx[..dim - 1].iter().map(|&i| weight[i]).sum();
        for (k, v) in chunk.iter_mut().enumerate() {
            *v *= (1.0 + base + weight[k]).powf(0.5 * s);
        }
    });
    lp_norm(&fft_inverse(&hat)?, r)
}

/// `‖m‖_{L^p}` on `grid` without materialising the samples.
///
/// Rows are clipped to the radial support, so thin annuli on fine grids
/// cost roughly their own area.
pub fn symbol_lp_norm(m: &dyn Symbol, grid: &Grid, p: f64) -> Result<f64> {
    check_p(p)?;
    if m.dim() != grid.dim() {
        return Err(Error::InvalidGrid("symbol and grid dimensions differ".into()));
    }
    let n = grid.points_per_axis();
    let dim = grid.dim();
    let h = grid.spacing();
    let rows = grid.len() / n;
    let support = m.support();
    let partial: Vec<f64> = (0..rows)
        .into_par_iter()
        .map(|row| {
            let mut x = vec![0.0; dim];
            grid.point(row * n, &mut x);
            let perp2: f64 = x[..dim - 1].iter().map(|v| v * v).sum();
            let (lo, hi) = match support.outer_radius() {
                None => (0, n),
                Some(outer) => {
                    if perp2 > outer * outer {
                        return 0.0;
                    }
                    let reach = (outer * outer - perp2).sqrt();
                    let lo = ((-reach / h).floor() as i64 + (n / 2) as i64 - 1).max(0) as usize;
                    let hi = ((reach / h).ceil() as i64 + (n / 2) as i64 + 2).min(n as i64) as usize;
                    (lo, hi)
                }
            };
            let inner2 = support.inner_radius().powi(2);
            let mut acc = 0.0f64;
            for i in lo..hi {
                x[dim - 1] = grid.coord(i);
                if perp2 + x[dim - 1] * x[dim - 1] < inner2 * (1.0 - 1e-12) {
                    continue;
                }
                let v = m.eval(&x).norm();
                if p.is_infinite() {
                    acc = acc.max(v);
                } else {
                    acc += v.powf(p);
                }
            }
            acc
        })
        .collect();
    if p.is_infinite() {
        return Ok(partial.into_iter().fold(0.0, f64::max));
    }
    let total: f64 = partial.into_iter().sum();
    Ok((total * h.powi(dim as i32)).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{FnSymbol, Gaussian};

    #[test]
    fn indicator_l2() {
        let g = Grid::new(1, 256, 8.0).unwrap();
        let f = Field::from_real_fn(g, |x| if (0.0..1.0).contains(&x[0]) { 1.0 } else { 0.0 });
        assert!((lp_norm(&f, 2.0).unwrap() - 1.0).abs() <= 1.0 / 256.0);
    }

    #[test]
    fn gaussian_l1_and_sup() {
        let g = Grid::new(1, 256, 32.0).unwrap();
        let f = Field::from_real_fn(g, |x| (-PI * x[0] * x[0]).exp());
        assert!((lp_norm(&f, 1.0).unwrap() - 1.0).abs() < 1e-8);
        assert_eq!(lp_norm(&f, f64::INFINITY).unwrap(), 1.0);
        assert_eq!(lp_norm(&Field::zeros(g), 3.0).unwrap(), 0.0);
        assert!(lp_norm(&f, 0.5).is_err());
    }

    #[test]
    fn sobolev_s0_is_lr() {
        let g = Grid::new(2, 64, 8.0).unwrap();
        let m = Gaussian { dim: 2, width: 1.0 };
        let direct = lp_norm(&sample(&m, &g).unwrap(), 2.0).unwrap();
        let via_potential = bessel_potential_norm(&sample(&m, &g).unwrap(), 2.0, 0.0).unwrap();
        assert!((sobolev_norm(&m, &g, 2.0, 0.0).unwrap() - direct).abs() < 1e-10);
        assert!((via_potential - direct).abs() < 1e-10);
    }

    #[test]
    fn sobolev_gaussian_closed_form() {
        // For e^{-π|x|²} in 1D, ‖(1-Δ)^{1/2} f‖₂² = ∫ (1 + 4π²ζ²) e^{-2πζ²} dζ.
        let g = Grid::new(1, 128, 16.0).unwrap();
        let m = Gaussian { dim: 1, width: 1.0 };
        let v = sobolev_norm(&m, &g, 2.0, 1.0).unwrap();
        let exact = (1.0 / 2f64.sqrt() + 4.0 * PI * PI / (4.0 * PI * 2f64.sqrt())).sqrt();
        assert!((v - exact).abs() < 1e-10, "{v} {exact}");
    }

    #[test]
    fn resolution_is_enforced() {
        let g = Grid::new(2, 32, 4.0).unwrap();
        let thin = FnSymbol::new(2, "thin", |_| Complex64::new(0.0, 0.0))
            .with_support(Support::Annulus { inner: 1.0, outer: 1.2 });
        assert!(matches!(sobolev_norm(&thin, &g, 2.0, 1.0), Err(Error::Resolution(_))));
        let wide = FnSymbol::new(2, "wide", |_| Complex64::new(0.0, 0.0)).with_support(Support::Ball { radius: 3.0 });
        assert!(matches!(sobolev_norm(&wide, &g, 2.0, 1.0), Err(Error::Resolution(_))));
    }

    #[test]
    fn streaming_norm_matches_sampled() {
        let g = Grid::new(2, 96, 3.0).unwrap();
        let m = FnSymbol::new(2, "ring", |z| {
            let r = (z[0] * z[0] + z[1] * z[1]).sqrt();
            Complex64::new(if (0.7..=1.1).contains(&r) { (r - 0.7) * (1.1 - r) } else { 0.0 }, 0.0)
        })
        .with_support(Support::Annulus { inner: 0.7, outer: 1.1 });
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            let a = symbol_lp_norm(&m, &g, p).unwrap();
            let b = lp_norm(&sample(&m, &g).unwrap(), p).unwrap();
            assert!((a - b).abs() <= 1e-12 * b.max(1e-300), "{p}: {a} {b}");
        }
    }
}
