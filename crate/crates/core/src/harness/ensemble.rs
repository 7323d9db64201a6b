use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::spectral::{fft_inverse, lp_norm, Field, Grid};
use crate::{Error, Result};

/// Reproducible pairs of unit-`L²` band-limited random inputs.
///
/// Trial `i` draws from its own ChaCha stream, so any trial can be
/// regenerated without the others.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialEnsemble {
    pub seed: u64,
    pub count: usize,
    pub grid: Grid,
    /// Radial band `[inner, outer]` of `f̂`.
    pub band_f: (f64, f64),
    /// Radial band of `ĝ`.
    pub band_g: (f64, f64),
}

impl TrialEnsemble {
    pub fn new(seed: u64, count: usize, grid: Grid, band_f: (f64, f64), band_g: (f64, f64)) -> Result<Self> {
        for (a, b) in [band_f, band_g] {
            if !(a >= 0.0) || !(b > a) {
                return Err(Error::InvalidParameter(format!("bad band [{a}, {b}]")));
            }
            let lo = grid.freq_spacing();
            if b < lo {
                return Err(Error::Resolution(format!("band [{a}, {b}] holds no frequency of spacing {lo}")));
            }
        }
        Ok(Self { seed, count, grid, band_f, band_g })
    }

    fn rng(&self, trial: usize, which: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(2 * trial as u64 + which);
        rng
    }

    /// Complex Gaussian spectrum on the band, normalised in `L²`.
    fn draw(&self, trial: usize, which: u64, band: (f64, f64)) -> Result<Field> {
        let mut rng = self.rng(trial, which);
        let freq = self.grid.dual();
        let mut z = vec![0.0; freq.dim()];
        let mut values = Vec::with_capacity(freq.len());
        for flat in 0..freq.len() {
            freq.point(flat, &mut z);
            let r = crate::spectral::norm(&z);
            // draw unconditionally so the stream does not depend on the band
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            values.push(if r >= band.0 && r <= band.1 { Complex64::new(re, im) } else { Complex64::new(0.0, 0.0) });
        }
        let f = fft_inverse(&Field::new(freq, values)?)?;
        let norm = lp_norm(&f, 2.0)?;
        if norm == 0.0 {
            return Err(Error::Resolution("empty band on this grid".into()));
        }
        Ok(f.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn pair(&self, trial: usize) -> Result<(Field, Field)> {
        Ok((self.draw(trial, 0, self.band_f)?, self.draw(trial, 1, self.band_g)?))
    }
}
