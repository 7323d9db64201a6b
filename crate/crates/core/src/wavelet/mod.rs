//! Daubechies tensor wavelets: the one-dimensional pair, coefficient trees,
//! analysis and synthesis of symbols, decay profiles and the column
//! partition of coefficients.

mod analysis;
mod dense;
mod filters;
mod index;
mod partition;
mod profile;
mod system;
mod tree;

pub use analysis::{analyze, analyze_detailed, reconstruct, tensor_wavelet_eval, Analysis, AnalyzeOptions};
pub use index::{Translation, WaveletIndex};
pub use partition::{amplitude_bands, band_of, column_key, column_partition, ColumnKey, ColumnPartition};
pub use profile::{coeff_decay_profile, Cell, DecayProfile};
pub use system::{Factor, WaveletSystem, MAX_ORDER, MIN_ORDER};
pub use tree::{CoeffTree, ZERO_CUTOFF};

/// Build the order-`k` system sampled at `2^{-R}`.
pub fn build_wavelet_system(order: usize, resolution: u32) -> crate::Result<WaveletSystem> {
    WaveletSystem::build(order, resolution)
}
