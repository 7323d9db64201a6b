use crate::harness::{Comparison, DecayFitReport};
use crate::quad::linear_fit;
use crate::spectral::{fft_inverse, sample, Field, Grid, Symbol};
use crate::{Error, Result};

/// `K = m^∨` on the spatial grid dual to `freq_grid`.
pub fn kernel(m: &dyn Symbol, freq_grid: &Grid) -> Result<Field> {
    fft_inverse(&sample(m, freq_grid)?)
}

/// Envelope of `|K|` in log-spaced bins of `1 + |x|₁`, `x = (y, z)`, and the
/// fitted power of its decay over `[r_min, r_max]`.
///
/// `|x|₁` here is `|y| + |z|` with the split `y = x[..dim/2]`.
pub fn kernel_decay_fit(
    k: &Field,
    r_min: f64,
    r_max: f64,
    bins: usize,
    predicted: f64,
    tolerance: f64,
) -> Result<DecayFitReport> {
    if !(r_min > 0.0) || !(r_max > r_min) || bins < 2 {
        return Err(Error::Fit(format!("bad far-field window [{r_min}, {r_max}] with {bins} bins")));
    }
    let grid = *k.grid();
    let dim = grid.dim();
    let half = dim / 2;
    let (a, b) = ((1.0 + r_min).log2(), (1.0 + r_max).log2());
    let width = (b - a) / bins as f64;
    let mut env = vec![0.0f64; bins];
    let mut x = vec![0.0; dim];
    for (flat, v) in k.values().iter().enumerate() {
        grid.point(flat, &mut x);
        let (y, z) = if half > 0 { x.split_at(half) } else { (&x[..], &x[..0]) };
        let r = 1.0 + crate::spectral::norm(y) + crate::spectral::norm(z);
        let l = r.log2();
        if l < a || l >= b {
            continue;
        }
        let bin = ((l - a) / width) as usize;
        let e = &mut env[bin.min(bins - 1)];
        *e = e.max(v.norm());
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = env
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0.0)
        .map(|(i, e)| (a + (i as f64 + 0.5) * width, e.log2()))
        .unzip();
    let (slope, intercept, rms) =
        linear_fit(&xs, &ys).ok_or_else(|| Error::Fit("too few nonempty far-field bins".into()))?;
    Ok(DecayFitReport::assemble(
        "log2(1+|y|+|z|)",
        &xs,
        &ys,
        slope,
        intercept,
        rms,
        predicted,
        tolerance,
        Comparison::AtMost,
    ))
}
