//! Amplitude level sets and the heavy-column split of a coefficient tree.

use std::collections::BTreeMap;

use serde::Serialize;

use super::index::WaveletIndex;
use super::tree::CoeffTree;
use crate::{Error, Result};

/// Column key: level, factor types and the ξ-translation `k`.
pub type ColumnKey = (u32, u32, Vec<i64>);

#[derive(Debug, Clone, Serialize)]
pub struct ColumnPartition {
    pub tau: u32,
    pub a: f64,
    pub r: f64,
    /// `ℓ^r` norm of the whole tree.
    pub b: f64,
    pub n1: usize,
    /// `B^r (2^{-τ}A)^{-r} / N1`.
    pub n2: f64,
    /// `2^r · N2`, the bound the band's lower edge actually guarantees.
    pub n2_rigorous: f64,
    pub u_tau: Vec<WaveletIndex>,
    pub u1: Vec<WaveletIndex>,
    pub u2: Vec<WaveletIndex>,
    pub heavy_columns: Vec<ColumnKey>,
}

impl ColumnPartition {
    /// `#P₁U¹_τ`.
    pub fn projection_count(&self) -> usize {
        self.heavy_columns.len()
    }
}

pub fn column_key(idx: &WaveletIndex) -> ColumnKey {
    let n = idx.dim() / 2;
    (idx.gamma, idx.flags, idx.k(n).to_vec())
}

/// Band number of `|b|` under `2^{-τ-1}A < |b| ≤ 2^{-τ}A`, capped at
/// `tau_max` (the bottom band takes everything below).
pub fn band_of(value: f64, a: f64, tau_max: u32) -> u32 {
    let v = value.abs();
    let mut tau = 0;
    let mut top = a;
    while tau < tau_max && v <= 0.5 * top {
        top *= 0.5;
        tau += 1;
    }
    tau
}

/// All bands `U_0..U_{τ_max}`; every stored coefficient lands in one.
pub fn amplitude_bands(tree: &CoeffTree, a: f64, tau_max: u32) -> Result<Vec<Vec<WaveletIndex>>> {
    check_amplitude(tree, a)?;
    let mut bands = vec![Vec::new(); tau_max as usize + 1];
    for (idx, v) in tree.iter() {
        bands[band_of(v, a, tau_max) as usize].push(idx.clone());
    }
    Ok(bands)
}

fn check_amplitude(tree: &CoeffTree, a: f64) -> Result<()> {
    if !(a > 0.0) || a < tree.sup_norm() {
        return Err(Error::InvalidParameter(format!(
            "top amplitude {a} below the largest coefficient {}",
            tree.sup_norm()
        )));
    }
    Ok(())
}

/// Split the band `U_τ` into long columns (at least `n1` members) and the rest.
pub fn column_partition(tree: &CoeffTree, tau: u32, a: f64, n1: usize, r: f64) -> Result<ColumnPartition> {
    check_amplitude(tree, a)?;
    if n1 == 0 {
        return Err(Error::InvalidParameter("N1 must be at least 1".into()));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("r = {r} must be positive and finite")));
    }
    if !tree.dim().is_multiple_of(2) {
        return Err(Error::InvalidParameter("columns need an even-dimensional tree".into()));
    }
    let top = a * 2f64.powi(-(tau as i32));
    let u_tau: Vec<WaveletIndex> =
        tree.iter().filter(|(_, v)| v.abs() <= top && v.abs() > 0.5 * top).map(|(i, _)| i.clone()).collect();

    let mut columns: BTreeMap<ColumnKey, usize> = BTreeMap::new();
    for idx in &u_tau {
        *columns.entry(column_key(idx)).or_default() += 1;
    }
    let heavy_columns: Vec<ColumnKey> = columns.into_iter().filter(|(_, c)| *c >= n1).map(|(k, _)| k).collect();
    let (u1, u2) = u_tau.iter().cloned().partition(|idx| heavy_columns.binary_search(&column_key(idx)).is_ok());

    let b = tree.lr_norm(r);
    let n2 = (b / top).powf(r) / n1 as f64;
    Ok(ColumnPartition { tau, a, r, b, n1, n2, n2_rigorous: 2f64.powf(r) * n2, u_tau, u1, u2, heavy_columns })
}
