use std::f64::consts::SQRT_2;

use serde::Serialize;

use super::filters::daubechies;
use crate::{Error, Result};

pub const MIN_ORDER: usize = 1;
pub const MAX_ORDER: usize = 10;
const CASCADE_TOL: f64 = 1e-9;
const CASCADE_MAX_ITER: usize = 40;

/// One-dimensional Daubechies pair `(ψ_F, ψ_M)` sampled on `2^{-R}ℤ`.
///
/// Order `k` means `∫ x^α ψ_M = 0` for `0 ≤ α ≤ k`, which takes the filter
/// with `k + 1` vanishing moments: length `2k + 2`, support `[0, 2k + 1]`.
#[derive(Debug, Clone, Serialize)]
pub struct WaveletSystem {
    order: usize,
    resolution: u32,
    low: Vec<f64>,
    high: Vec<f64>,
    phi: Vec<f64>,
    psi: Vec<f64>,
    cascade_iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    /// Scaling function `ψ_F`.
    F,
    /// Wavelet `ψ_M`.
    M,
}

impl WaveletSystem {
    pub fn build(order: usize, resolution: u32) -> Result<Self> {
        if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
            return Err(Error::Table(format!("order {order} not tabulated (supported {MIN_ORDER}..={MAX_ORDER})")));
        }
        if !(4..=16).contains(&resolution) {
            return Err(Error::InvalidParameter(format!("resolution {resolution} outside 4..=16")));
        }
        let low = daubechies(order + 1).expect("table covers supported orders").to_vec();
        let len = low.len();
        let high: Vec<f64> = (0..len).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * low[len - 1 - k]).collect();
        let (ints, cascade_iterations) = integer_values(&low)?;
        let phi = refine(&low, ints, resolution);
        let psi = wavelet_from_scaling(&high, &phi, resolution);
        Ok(Self { order, resolution, low, high, phi, psi, cascade_iterations })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn low_pass(&self) -> &[f64] {
        &self.low
    }

    pub fn high_pass(&self) -> &[f64] {
        &self.high
    }

    pub fn cascade_iterations(&self) -> usize {
        self.cascade_iterations
    }

    /// Length `S = 2k + 1` of `[0, S]`, the common support of both factors.
    pub fn support_length(&self) -> usize {
        self.low.len() - 1
    }

    /// Diameter of a level-0 tensor wavelet in `dim` variables.
    pub fn support_diameter(&self, dim: usize) -> f64 {
        self.support_length() as f64 * (dim as f64).sqrt()
    }

    pub fn step(&self) -> f64 {
        2f64.powi(-(self.resolution as i32))
    }

    pub fn samples(&self, factor: Factor) -> &[f64] {
        match factor {
            Factor::F => &self.phi,
            Factor::M => &self.psi,
        }
    }

    /// Table value at `x = i·2^{-r}` for `r ≤ R`; zero off the support.
    pub fn at_dyadic(&self, factor: Factor, i: i64, r: u32) -> f64 {
        debug_assert!(r <= self.resolution);
        let idx = i << (self.resolution - r);
        let table = self.samples(factor);
        if idx < 0 || idx as usize >= table.len() {
            0.0
        } else {
            table[idx as usize]
        }
    }

    /// Linear interpolation of the table.
    pub fn eval(&self, factor: Factor, x: f64) -> f64 {
        let table = self.samples(factor);
        let u = x * (1u64 << self.resolution) as f64;
        if !(u >= 0.0) || u >= (table.len() - 1) as f64 {
            return 0.0;
        }
        let i = u.floor() as usize;
        let t = u - i as f64;
        table[i] * (1.0 - t) + table[i + 1] * t
    }

    /// `∫ x^p ψ(x) dx` by the dyadic Riemann sum on the table.
    pub fn moment(&self, factor: Factor, p: u32) -> f64 {
        let h = self.step();
        self.samples(factor).iter().enumerate().map(|(i, v)| v * (i as f64 * h).powi(p as i32)).sum::<f64>() * h
    }

    pub fn l2_norm(&self, factor: Factor) -> f64 {
        (self.samples(factor).iter().map(|v| v * v).sum::<f64>() * self.step()).sqrt()
    }

    /// `⟨2^{γ/2}ψ_a(2^γ· - μ), 2^{γ'/2}ψ_b(2^{γ'}· - μ')⟩` by the Riemann sum
    /// on the finest grid both tables resolve exactly.
    pub fn inner_product_1d(&self, a: (Factor, u32, i64), b: (Factor, u32, i64)) -> f64 {
        let (fa, ga, ma) = a;
        let (fb, gb, mb) = b;
        let r = self.resolution;
        let s = self.support_length() as i64;
        let top = ga.max(gb);
        debug_assert!(top <= r);
        // grid 2^{-r}: x_i = i 2^{-r}, 2^γ x - μ = (i - μ 2^{r-γ}) 2^{γ-r}
        let lo_a = ma << (r - ga);
        let hi_a = (ma + s) << (r - ga);
        let lo_b = mb << (r - gb);
        let hi_b = (mb + s) << (r - gb);
        let (lo, hi) = (lo_a.max(lo_b), hi_a.min(hi_b));
        if lo >= hi {
            return 0.0;
        }
        let mut acc = 0.0;
        for i in lo..=hi {
            let va = self.table_at(fa, (i - lo_a) << ga);
            let vb = self.table_at(fb, (i - lo_b) << gb);
            acc += va * vb;
        }
        acc * 2f64.powf(0.5 * (ga + gb) as f64) * self.step()
    }

    fn table_at(&self, factor: Factor, idx: i64) -> f64 {
        let t = self.samples(factor);
        if idx < 0 || idx as usize >= t.len() {
            0.0
        } else {
            t[idx as usize]
        }
    }
}

/// Values of `φ` at `0..=S` as the normalised fixed point of
/// `φ(i) = √2 Σ_k h_k φ(2i - k)`.
///
/// `φ(0) = φ(S) = 0` for two or more vanishing moments, so only the
/// interior is iterated; the end points carry slower eigenvalues.
fn integer_values(h: &[f64]) -> Result<(Vec<f64>, usize)> {
    let s = h.len() - 1;
    let inner = s - 1;
    let mut t = vec![vec![0.0; inner]; inner];
    for (i, row) in t.iter_mut().enumerate() {
        for (k, hk) in h.iter().enumerate() {
            let j = 2 * (i as i64 + 1) - k as i64 - 1;
            if (0..inner as i64).contains(&j) {
                row[j as usize] += SQRT_2 * hk;
            }
        }
    }
    let step = |v: &[f64]| -> Vec<f64> {
        let mut w: Vec<f64> = t.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        w
    };
    let mut v = vec![1.0 / inner as f64; inner];
    let mut converged = None;
    for it in 1..=CASCADE_MAX_ITER {
        let w = step(&v);
        let diff = w.iter().zip(&v).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        v = w;
        if diff < CASCADE_TOL {
            converged = Some(it);
            break;
        }
    }
    let iterations = converged.ok_or_else(|| {
        Error::Numeric(format!("cascade did not reach {CASCADE_TOL:e} in {CASCADE_MAX_ITER} iterations"))
    })?;
    // The subdominant eigenvalue is 1/2; polish to round-off.
    for _ in 0..60 {
        let w = step(&v);
        let diff = w.iter().zip(&v).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        v = w;
        if diff < 1e-16 {
            break;
        }
    }
    let mut full = vec![0.0; s + 1];
    full[1..s].copy_from_slice(&v);
    Ok((full, iterations))
}

/// Dyadic refinement from the integers to `2^{-R}ℤ`.
fn refine(h: &[f64], ints: Vec<f64>, resolution: u32) -> Vec<f64> {
    let s = h.len() - 1;
    let mut vals = ints;
    for r in 1..=resolution {
        let half = 1usize << (r - 1);
        let n = s * (1 << r) + 1;
        let mut next = vec![0.0; n];
        for (i, out) in next.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, hk) in h.iter().enumerate() {
                if let Some(j) = i.checked_sub(k * half) {
                    if j < vals.len() {
                        acc += hk * vals[j];
                    }
                }
            }
            *out = SQRT_2 * acc;
        }
        vals = next;
    }
    vals
}

/// `ψ(x) = √2 Σ_k g_k φ(2x - k)` on the same grid.
fn wavelet_from_scaling(g: &[f64], phi: &[f64], resolution: u32) -> Vec<f64> {
    let n = phi.len();
    let unit = 1usize << resolution;
    (0..n)
        .map(|i| {
            let acc: f64 = g
                .iter()
                .enumerate()
                .filter_map(|(k, gk)| (2 * i).checked_sub(k * unit).filter(|&j| j < n).map(|j| gk * phi[j]))
                .sum();
            SQRT_2 * acc
        })
        .collect()
}
