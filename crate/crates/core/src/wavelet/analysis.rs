//! Coefficients `a_ω = ⟨m, ω⟩` of a compactly supported symbol and the
//! inverse synthesis.
//!
//! `m` is first projected onto the scaling space at level `J = γ_max + 1`
//! by a Riemann sum on the lattice `2^{-J-q}ℤ^dim`. For `m ∈ V_J` that sum
//! equals the exact coefficients convolved (per axis) with the discrete
//! Gram sequence `g(k) = 2^{-q} Σ_i φ(i2^{-q}) φ(i2^{-q} - k)`, so it is
//! deconvolved by a Neumann series. A zero-extended Mallat pyramid then
//! yields the details at levels `J-1, …, 0` and the level-0 scaling part.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use smallvec::SmallVec;

use super::dense::{union_box, Dense};
use super::index::WaveletIndex;
use super::system::{Factor, WaveletSystem};
use super::tree::{CoeffTree, ZERO_CUTOFF};
use crate::spectral::{Field, Grid, Symbol};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyzeOptions {
    pub gamma_max: u32,
    /// The sampling lattice is `2^{-q}` finer than the finest scaling level.
    pub quad_level: u32,
    pub max_neumann_terms: usize,
    /// Tag stored in the tree.
    pub piece: Option<u32>,
}

impl AnalyzeOptions {
    pub fn new(gamma_max: u32) -> Self {
        Self { gamma_max, quad_level: 2, max_neumann_terms: 60, piece: None }
    }

    pub fn with_quad_level(mut self, q: u32) -> Self {
        self.quad_level = q;
        self
    }

    pub fn for_piece(mut self, j: u32) -> Self {
        self.piece = Some(j);
        self
    }
}

/// Tree plus bookkeeping on what the truncation at `γ_max` lost.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub tree: CoeffTree,
    /// `‖m‖²_{L²}` from the sampling lattice.
    pub norm_sq: f64,
    /// `‖m‖² - Σ|a_ω|²`.
    pub tail_energy: f64,
    pub samples: usize,
}

/// `2^{γ·dim/2} Π_a ψ_{G_a}(2^γ x_a - μ_a)`.
pub fn tensor_wavelet_eval(sys: &WaveletSystem, idx: &WaveletIndex, point: &[f64]) -> f64 {
    let scale = 2f64.powi(idx.gamma as i32);
    let mut v = scale.powf(0.5 * idx.dim() as f64);
    for (a, x) in point.iter().enumerate() {
        v *= sys.eval(idx.factor(a), scale * x - idx.mu[a] as f64);
        if v == 0.0 {
            return 0.0;
        }
    }
    v
}

pub fn analyze(m: &dyn Symbol, sys: &WaveletSystem, opts: AnalyzeOptions) -> Result<CoeffTree> {
    Ok(analyze_detailed(m, sys, opts)?.tree)
}

pub fn analyze_detailed(m: &dyn Symbol, sys: &WaveletSystem, opts: AnalyzeOptions) -> Result<Analysis> {
    let dim = m.dim();
    let q = opts.quad_level;
    if q < 1 {
        return Err(Error::Resolution(
            "the sampling lattice must be at least twice as fine as the finest scaling level".into(),
        ));
    }
    if q > sys.resolution() {
        return Err(Error::InvalidParameter(format!(
            "quadrature level {q} exceeds the wavelet table resolution {}",
            sys.resolution()
        )));
    }
    let big_j = opts.gamma_max + 1;
    let support = m.support();
    let Some(r_out) = support.outer_radius() else {
        return Err(Error::InvalidParameter("analysis needs a symbol with bounded support".into()));
    };
    let h = 2f64.powi(-((big_j + q) as i32));
    if let Some(w) = support.width() {
        if w / h < 4.0 {
            return Err(Error::Resolution(format!(
                "support width {w:.3e} spans {:.1} lattice cells at level {}",
                w / h,
                opts.gamma_max
            )));
        }
    }
    let r_in = support.inner_radius();

    let sampled = scaling_projection(m, sys, big_j, q, r_in, r_out)?;
    let mut c = sampled.coeffs;
    if c.max_abs() == 0.0 {
        let tree = CoeffTree::new(dim, opts.piece);
        return Ok(Analysis { tree, norm_sq: 0.0, tail_energy: 0.0, samples: sampled.samples });
    }
    let e = gram_defect(sys, q);
    for axis in 0..dim {
        c = neumann_deconvolve(&c, axis, &e, opts.max_neumann_terms)?;
    }

    let mut entries = BTreeMap::new();
    for gamma in (0..big_j).rev() {
        for (flags, band) in split_level(&c, sys) {
            if flags == 0 {
                c = band;
            } else {
                collect(&band, gamma, flags, &mut entries);
            }
        }
    }
    collect(&c, 0, 0, &mut entries);
    let tree = CoeffTree::from_map(dim, opts.piece, entries);
    let tail = sampled.norm_sq - tree.energy();
    Ok(Analysis { tree, norm_sq: sampled.norm_sq, tail_energy: tail, samples: sampled.samples })
}

fn split_level(c: &Dense, sys: &WaveletSystem) -> Vec<(u32, Dense)> {
    let mut bands = vec![(0u32, c.clone())];
    for axis in 0..c.dim() {
        bands = bands
            .into_iter()
            .flat_map(|(flags, arr)| {
                let lo = arr.analysis(axis, sys.low_pass());
                let hi = arr.analysis(axis, sys.high_pass());
                [(flags, lo), (flags | 1 << axis, hi)]
            })
            .collect();
    }
    bands
}

fn collect(band: &Dense, gamma: u32, flags: u32, out: &mut BTreeMap<WaveletIndex, f64>) {
    let mut idx = vec![0i64; band.dim()];
    for (flat, v) in band.data.iter().enumerate() {
        if v.abs() < ZERO_CUTOFF {
            continue;
        }
        band.index_of(flat, &mut idx);
        out.insert(WaveletIndex { gamma, flags, mu: SmallVec::from_slice(&idx) }, *v);
    }
}

struct Projection {
    coeffs: Dense,
    norm_sq: f64,
    samples: usize,
}

struct Row {
    prefix: SmallVec<[i64; 4]>,
    nu_lo: i64,
    vals: Vec<f64>,
}

/// Riemann-sum projection onto `V_J`, skipping lattice rows that miss the
/// radial support.
fn scaling_projection(
    m: &dyn Symbol,
    sys: &WaveletSystem,
    big_j: u32,
    q: u32,
    r_in: f64,
    r_out: f64,
) -> Result<Projection> {
    let dim = m.dim();
    let step = 1i64 << q;
    let s = sys.support_length() as i64;
    let h = 2f64.powi(-((big_j + q) as i32));
    let reach = (r_out / h).ceil() as i64 + 1;
    let ph: Vec<f64> = (0..=s * step).map(|t| sys.at_dyadic(Factor::F, t, q)).collect();
    let nu_range =
        |i: i64| ((i - s * step).div_euclid(step) + ((i - s * step).rem_euclid(step) != 0) as i64, i.div_euclid(step));

    // enumerate row prefixes in lexicographic order
    let mut prefixes: Vec<SmallVec<[i64; 4]>> = vec![SmallVec::new()];
    for _ in 0..dim - 1 {
        let mut next = Vec::new();
        for p in &prefixes {
            let used: f64 = p.iter().map(|&i| (i as f64 * h).powi(2)).sum();
            for i in -reach..=reach {
                let r2 = used + (i as f64 * h).powi(2);
                if r2 <= r_out * r_out * (1.0 + 1e-12) + 4.0 * h * h {
                    let mut q2 = p.clone();
                    q2.push(i);
                    next.push(q2);
                }
            }
        }
        prefixes = next;
    }

    let rows: Vec<(Row, f64, usize, f64)> = prefixes
        .into_par_iter()
        .map(|prefix| {
            let mut x: Vec<f64> = prefix.iter().map(|&i| i as f64 * h).collect();
            x.push(0.0);
            let perp2: f64 = x[..dim - 1].iter().map(|v| v * v).sum();
            let outer = (r_out * r_out - perp2).max(0.0).sqrt();
            let mut segs: SmallVec<[(i64, i64); 2]> = SmallVec::new();
            let hi = (outer / h).floor() as i64 + 1;
            if r_in * r_in > perp2 {
                let inner = (r_in * r_in - perp2).sqrt();
                let lo = (inner / h).ceil() as i64 - 1;
                if lo <= 0 {
                    segs.push((-hi, hi));
                } else {
                    segs.push((-hi, -lo));
                    segs.push((lo, hi));
                }
            } else {
                segs.push((-hi, hi));
            }
            let first = segs[0].0;
            let last = segs[segs.len() - 1].1;
            let nu_lo = nu_range(first).0;
            let nu_hi = nu_range(last).1;
            let mut vals = vec![0.0; (nu_hi - nu_lo + 1) as usize];
            let mut norm_sq = 0.0;
            let mut count = 0usize;
            let mut imag = 0.0f64;
            for &(a, b) in &segs {
                for i in a..=b {
                    x[dim - 1] = i as f64 * h;
                    let z = m.eval(&x);
                    imag = imag.max(z.im.abs());
                    let v = z.re;
                    count += 1;
                    if v == 0.0 {
                        continue;
                    }
                    norm_sq += v * v;
                    let (n0, n1) = nu_range(i);
                    for nu in n0..=n1 {
                        vals[(nu - nu_lo) as usize] += v * ph[(i - nu * step) as usize];
                    }
                }
            }
            (Row { prefix, nu_lo, vals }, norm_sq, count, imag)
        })
        .collect();

    let mut norm_sq = 0.0;
    let mut samples = 0;
    let mut real_peak = 0.0f64;
    let mut imag = 0.0f64;
    for (row, ns, c, im) in &rows {
        norm_sq += ns;
        samples += c;
        imag = imag.max(*im);
        real_peak = real_peak.max(row.vals.iter().fold(0.0f64, |a, v| a.max(v.abs())));
    }
    if imag > 1e-12 * real_peak.max(1e-300) && imag > 1e-14 {
        return Err(Error::InvalidParameter(format!(
            "analysis expects a real symbol; imaginary part reaches {imag:.3e}"
        )));
    }
    let cell = h.powi(dim as i32);
    norm_sq *= cell;
    let weight = cell * 2f64.powf(0.5 * (big_j as f64) * dim as f64);

    // coefficient box, padded so the deconvolution tail fits
    let pad = 8 * s;
    let (nl, nh) = (nu_range(-reach).0 - pad, nu_range(reach).1 + pad);
    let lo = vec![nl; dim];
    let shape = vec![(nh - nl + 1) as usize; dim];
    let mut coeffs = Dense::zeros(lo, shape.clone());
    let width = shape[0];

    if dim == 1 {
        let row = &rows[0].0;
        for (t, v) in row.vals.iter().enumerate() {
            coeffs.data[(row.nu_lo + t as i64 - nl) as usize] += v * weight;
        }
        return Ok(Projection { coeffs, norm_sq, samples });
    }

    // rows sharing their first lattice index are contiguous
    let mut groups: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
    for (k, (row, _, _, _)) in rows.iter().enumerate() {
        let e = groups.entry(row.prefix[0]).or_insert((k, k));
        e.1 = k + 1;
    }
    let slab: usize = shape[1..].iter().product();
    coeffs.data.par_chunks_mut(slab).enumerate().for_each(|(v0, out)| {
        let nu0 = nl + v0 as i64;
        let mut odo = vec![0i64; dim];
        for t0 in 0..=s * step {
            let i0 = nu0 * step + t0;
            let w0 = ph[t0 as usize];
            if w0 == 0.0 {
                continue;
            }
            let Some(&(a, b)) = groups.get(&i0) else { continue };
            for (row, _, _, _) in &rows[a..b] {
                // middle axes 1..dim-1: loop over every ν with a nonzero weight
                let ranges: SmallVec<[(i64, i64); 4]> = row.prefix[1..].iter().map(|&i| nu_range(i)).collect();
                for (k, r) in ranges.iter().enumerate() {
                    odo[k] = r.0;
                }
                loop {
                    let mut w = w0 * weight;
                    let mut off = 0usize;
                    for (k, &nu) in odo[..ranges.len()].iter().enumerate() {
                        w *= ph[(row.prefix[k + 1] - nu * step) as usize];
                        off = off * width + (nu - nl) as usize;
                    }
                    if w != 0.0 {
                        let base = off * width;
                        for (t, v) in row.vals.iter().enumerate() {
                            out[base + (row.nu_lo + t as i64 - nl) as usize] += w * v;
                        }
                    }
                    let mut done = true;
                    for k in (0..ranges.len()).rev() {
                        if odo[k] < ranges[k].1 {
                            odo[k] += 1;
                            done = false;
                            break;
                        }
                        odo[k] = ranges[k].0;
                    }
                    if done {
                        break;
                    }
                }
            }
        }
    });
    Ok(Projection { coeffs, norm_sq, samples })
}

/// Taps of `g - δ` on `[-S, S]`.
fn gram_defect(sys: &WaveletSystem, q: u32) -> Vec<f64> {
    let s = sys.support_length() as i64;
    let step = 1i64 << q;
    let n = s * step;
    let ph: Vec<f64> = (0..=n).map(|t| sys.at_dyadic(Factor::F, t, q)).collect();
    let scale = 2f64.powi(-(q as i32));
    (-s..=s)
        .map(|k| {
            let g: f64 = (0..=n)
                .filter_map(|t| {
                    let u = t - k * step;
                    (0..=n).contains(&u).then(|| ph[t as usize] * ph[u as usize])
                })
                .sum::<f64>()
                * scale;
            if k == 0 {
                g - 1.0
            } else {
                g
            }
        })
        .collect()
}

fn neumann_deconvolve(c: &Dense, axis: usize, e: &[f64], max_terms: usize) -> Result<Dense> {
    let tol = 1e-17 * c.max_abs();
    c.deconvolve_lines(axis, e, tol, max_terms)
        .ok_or_else(|| Error::Numeric(format!("Gram correction did not converge in {max_terms} terms")))
}

/// Scaling coefficients at level `max γ + 1` from a tree, by the inverse
/// pyramid. Returns the box and its level.
pub(crate) fn synthesize_scaling(tree: &CoeffTree, sys: &WaveletSystem) -> Option<(Dense, u32)> {
    let dim = tree.dim();
    let top = tree.max_gamma()?;
    let mut by_band: BTreeMap<(u32, u32), Vec<(&WaveletIndex, f64)>> = BTreeMap::new();
    for (k, v) in tree.iter() {
        by_band.entry((k.gamma, k.flags)).or_default().push((k, v));
    }
    let bbox = |items: &[(&WaveletIndex, f64)]| -> (Vec<i64>, Vec<usize>) {
        let mut lo = vec![i64::MAX; dim];
        let mut hi = vec![i64::MIN; dim];
        for (k, _) in items {
            for a in 0..dim {
                lo[a] = lo[a].min(k.mu[a]);
                hi[a] = hi[a].max(k.mu[a]);
            }
        }
        let shape = (0..dim).map(|a| (hi[a] - lo[a] + 1) as usize).collect();
        (lo, shape)
    };
    let mut c: Option<Dense> = None;
    for gamma in 0..=top {
        let mut lo_shape: Option<(Vec<i64>, Vec<usize>)> = c.as_ref().map(|d| (d.lo.clone(), d.shape.clone()));
        for flags in 0..(1u32 << dim) {
            if let Some(items) = by_band.get(&(gamma, flags)) {
                let b = bbox(items);
                lo_shape = Some(match lo_shape {
                    None => b,
                    Some(cur) => union_box((&cur.0, &cur.1), (&b.0, &b.1)),
                });
            }
        }
        let (lo, shape) = lo_shape.unwrap_or_else(|| (vec![0; dim], vec![1; dim]));
        let mut bands: Vec<Dense> = (0..(1u32 << dim)).map(|_| Dense::zeros(lo.clone(), shape.clone())).collect();
        if let Some(prev) = &c {
            bands[0] = prev.embed(&lo, &shape);
        }
        for flags in 0..(1u32 << dim) {
            if let Some(items) = by_band.get(&(gamma, flags)) {
                for (k, v) in items {
                    let off = bands[flags as usize].offset(&k.mu).expect("box covers entries");
                    bands[flags as usize].data[off] += v;
                }
            }
        }
        // merge axis by axis, highest flag bit first
        for axis in (0..dim).rev() {
            let half = bands.len() / 2;
            let mut merged = Vec::with_capacity(half);
            for f in 0..half {
                let low = &bands[f];
                let high = &bands[f + half];
                let mut up = low.synthesis(axis, sys.low_pass());
                up.add_assign(&high.synthesis(axis, sys.high_pass()));
                merged.push(up);
            }
            bands = merged;
        }
        c = bands.pop();
    }
    c.map(|d| (d, top + 1))
}

/// Samples of `Σ a_ω ω` on `grid`.
pub fn reconstruct(tree: &CoeffTree, sys: &WaveletSystem, grid: &Grid) -> Result<Field> {
    if tree.dim() != grid.dim() {
        return Err(Error::InvalidGrid("tree and grid dimensions differ".into()));
    }
    let Some((c, big_j)) = synthesize_scaling(tree, sys) else {
        return Ok(Field::zeros(*grid));
    };
    let dim = grid.dim();
    let scale = 2f64.powi(big_j as i32);
    let norm = scale.powf(0.5 * dim as f64);
    let s = sys.support_length() as i64;
    Ok(Field::from_real_fn(*grid, |x| {
        let mut weights: SmallVec<[(i64, SmallVec<[f64; 24]>); 4]> = SmallVec::new();
        for (a, &xa) in x.iter().enumerate() {
            let u = scale * xa;
            let lo = ((u - s as f64).ceil() as i64).max(c.lo[a]);
            let hi = (u.floor() as i64).min(c.hi(a));
            if lo > hi {
                return 0.0;
            }
            let w = (lo..=hi).map(|nu| sys.eval(Factor::F, u - nu as f64)).collect();
            weights.push((lo, w));
        }
        let mut total = 0.0;
        let mut odo = vec![0usize; dim];
        'outer: loop {
            let mut w = 1.0;
            let mut idx: SmallVec<[i64; 4]> = SmallVec::new();
            for a in 0..dim {
                w *= weights[a].1[odo[a]];
                idx.push(weights[a].0 + odo[a] as i64);
            }
            if w != 0.0 {
                if let Some(off) = c.offset(&idx) {
                    total += w * c.data[off];
                }
            }
            for a in (0..dim).rev() {
                odo[a] += 1;
                if odo[a] < weights[a].1.len() {
                    continue 'outer;
                }
                odo[a] = 0;
            }
            break;
        }
        total * norm
    }))
}
