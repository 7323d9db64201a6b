//! Grids, sampled fields, the continuous-convention FFT and norms.

mod fft;
mod field;
mod grid;
mod norms;
mod symbol;

pub(crate) use fft::transform_axis;
pub use fft::{fft_forward, fft_inverse, forward_lines, inverse_lines};
pub use field::Field;
pub use grid::Grid;
pub use norms::{bessel_potential_norm, check_resolution, lp_norm, sobolev_norm, symbol_lp_norm};
pub use symbol::{
    norm, sample, Constant, FnSymbol, Gaussian, RadialDerivative, SampledSymbol, Separable, Support, Symbol, SymbolRef,
};

use crate::{Error, Result};

/// `(w · f̂)^∨` for a multiplier `w` on the same dimension as `f`.
pub fn apply_freq_multiplier(f: &Field, w: &dyn Symbol) -> Result<Field> {
    if w.dim() != f.grid().dim() {
        return Err(Error::InvalidGrid(format!(
            "multiplier of dimension {} applied to a {}-dimensional field",
            w.dim(),
            f.grid().dim()
        )));
    }
    let hat = fft_forward(f)?;
    let weights = sample(w, hat.grid())?;
    fft_inverse(&hat.mul(&weights)?)
}
