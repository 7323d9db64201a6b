//! Discrete approximation of `f̂(ξ) = ∫ f(x) e^{-2πi x·ξ} dx` on centered grids.
//!
//! Per axis, with `x_j = -L/2 + j·h` and `ξ_k = (k - N/2)/L`,
//!
//! ```text
//! e^{-2πi x_j ξ_k} = (-1)^{j} (-1)^{k + N/2} e^{-2πi jk/N}
//! ```
//!
//! so a transform is a sign flip, a plain DFT, a second sign flip and the
//! quadrature weight `h` (forward) or `1/L` (inverse).

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{Field, Grid};
use crate::Result;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(n)
        } else {
            p.plan_fft_inverse(n)
        }
    })
}

#[inline]
fn alt(i: usize) -> f64 {
    if i.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Forward-transform every length-`n` line packed in `buf`; `spacing` is the
/// physical grid step `h`.
pub fn forward_lines(buf: &mut [Complex64], n: usize, spacing: f64) {
    debug_assert_eq!(buf.len() % n, 0);
    let half = n / 2;
    for line in buf.chunks_mut(n) {
        for (j, v) in line.iter_mut().enumerate() {
            *v *= alt(j);
        }
    }
    plan(n, true).process(buf);
    for line in buf.chunks_mut(n) {
        for (k, v) in line.iter_mut().enumerate() {
            *v *= alt(k + half) * spacing;
        }
    }
}

/// Inverse of [`forward_lines`]; `freq_spacing` is `1/L`.
pub fn inverse_lines(buf: &mut [Complex64], n: usize, freq_spacing: f64) {
    debug_assert_eq!(buf.len() % n, 0);
    let half = n / 2;
    for line in buf.chunks_mut(n) {
        for (k, v) in line.iter_mut().enumerate() {
            *v *= alt(k + half);
        }
    }
    plan(n, false).process(buf);
    for line in buf.chunks_mut(n) {
        for (j, v) in line.iter_mut().enumerate() {
            *v *= alt(j) * freq_spacing;
        }
    }
}

const LINES_PER_TASK: usize = 64;

/// Transform `values` (shape `n^dim`) along one axis in place.
pub(crate) fn transform_axis(values: &mut [Complex64], n: usize, dim: usize, axis: usize, forward: bool, weight: f64) {
    let apply = |buf: &mut [Complex64]| {
        if forward {
            forward_lines(buf, n, weight)
        } else {
            inverse_lines(buf, n, weight)
        }
    };
    let stride = n.pow((dim - 1 - axis) as u32);
    if stride == 1 {
        values.par_chunks_mut(n * LINES_PER_TASK).for_each(apply);
        return;
    }
    // Gather strided lines into contiguous storage, transform, scatter back.
    let block = n * stride;
    let blocks = values.len() / block;
    let mut lines = vec![Complex64::new(0.0, 0.0); values.len()];
    for b in 0..blocks {
        let src = &values[b * block..(b + 1) * block];
        let dst = &mut lines[b * block..(b + 1) * block];
        for s in 0..stride {
            for i in 0..n {
                dst[s * n + i] = src[i * stride + s];
            }
        }
    }
    lines.par_chunks_mut(n * LINES_PER_TASK).for_each(apply);
    for b in 0..blocks {
        let src = &lines[b * block..(b + 1) * block];
        let dst = &mut values[b * block..(b + 1) * block];
        for s in 0..stride {
            for i in 0..n {
                dst[i * stride + s] = src[s * n + i];
            }
        }
    }
}

/// Continuous-convention forward transform; the result lives on `grid.dual()`.
pub fn fft_forward(f: &Field) -> Result<Field> {
    let g = *f.grid();
    let mut values = f.values().to_vec();
    for axis in 0..g.dim() {
        transform_axis(&mut values, g.points_per_axis(), g.dim(), axis, true, g.spacing());
    }
    Field::new(g.dual(), values)
}

/// Inverse of [`fft_forward`]; takes a field on a dual grid.
pub fn fft_inverse(f: &Field) -> Result<Field> {
    let g = *f.grid();
    let physical: Grid = g.dual();
    let mut values = f.values().to_vec();
    for axis in 0..g.dim() {
        transform_axis(&mut values, g.points_per_axis(), g.dim(), axis, false, physical.freq_spacing());
    }
    Field::new(physical, values)
}
