//! Numerical laboratory for bilinear Fourier multipliers and their maximal
//! operators.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`] holds grids, sampled fields, the `e^{-2πi x·ξ}` Fourier
//!   transform with explicit quadrature weights, and `L^p` / Sobolev norms.
//! * [`zoo`] builds the concrete symbols: Bessel symbols, Bochner-Riesz
//!   symbols, smooth dyadic partitions and their annular pieces.
//! * [`wavelet`] provides Daubechies tensor wavelets, coefficient trees and
//!   the amplitude/column partition of coefficient sets.
//! * [`operators`] evaluates the bilinear operators `S_t`, their maximal
//!   functions, square functions, kernels and the Hardy-Littlewood majorant.
//! * [`harness`] drives experiments: slope fits, random ensembles and the
//!   identity checks used by the acceptance suite and the CLI.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod operators;
pub mod quad;
pub mod spectral;
pub mod wavelet;
pub mod zoo;

pub use error::{Error, Result};
pub use num_complex::Complex64;
