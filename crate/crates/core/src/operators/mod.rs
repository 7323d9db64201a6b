//! Bilinear operators evaluated through the FFT: dilated multipliers, their
//! maximal function, tilde operators, square functions, kernels and the
//! Hardy-Littlewood majorant.

mod bilinear;
mod dilation;
mod hardy;
mod kernel;
mod square;

pub use bilinear::{apply_bilinear, maximal_operator, maximal_with, BilinearInputs, BilinearResult, PerTRow};
pub use dilation::{effective_range, joint_band, DilationGrid, DEFAULT_PER_OCTAVE};
pub use hardy::hl_maximal;
pub use kernel::{kernel, kernel_decay_fit};
pub use square::{g_function, square_functions, tilde_operator, SquareFunctions, TRUNCATION_TOL};
