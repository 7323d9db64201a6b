//! Concrete symbols: Bessel and Bochner-Riesz multipliers, dyadic
//! partitions and their annular pieces.

mod bessel;
mod params;
mod partition;
mod pieces;
mod split;
mod symbols;

pub use bessel::{bessel_j, bessel_ratio, bessel_ratio_series};
pub use params::DecayClassParams;
pub use partition::{smooth_step, smooth_step_derivative, DyadicPartition, PartitionKind};
pub use pieces::{dyadic_pieces, flavor_for, radial_derivative_symbol, AnnularPiece, PieceFlavor};
pub use split::{diagonal_split, split_part, DiagonalSplit, SplitPart};
pub use symbols::{
    bochner_riesz_symbol, bump_symbol, m_alpha_symbol, BesselSymbol, BochnerRiesz, Bump, BESSEL_SERIES_RADIUS,
};
