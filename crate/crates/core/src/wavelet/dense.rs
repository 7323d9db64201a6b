//! Dense coefficient boxes on a rectangle of `ℤ^dim`, zero outside.

use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Dense {
    pub lo: Vec<i64>,
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

impl Dense {
    pub fn zeros(lo: Vec<i64>, shape: Vec<usize>) -> Self {
        let len = shape.iter().product();
        Self { lo, shape, data: vec![0.0; len] }
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn hi(&self, axis: usize) -> i64 {
        self.lo[axis] + self.shape[axis] as i64 - 1
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dim()];
        for a in (0..self.dim().saturating_sub(1)).rev() {
            s[a] = s[a + 1] * self.shape[a + 1];
        }
        s
    }

    pub fn offset(&self, idx: &[i64]) -> Option<usize> {
        let strides = self.strides();
        let mut off = 0;
        for a in 0..self.dim() {
            let i = idx[a] - self.lo[a];
            if i < 0 || i as usize >= self.shape[a] {
                return None;
            }
            off += i as usize * strides[a];
        }
        Some(off)
    }

    /// Multi-index of a flat offset.
    pub fn index_of(&self, mut flat: usize, out: &mut [i64]) {
        for a in (0..self.dim()).rev() {
            out[a] = self.lo[a] + (flat % self.shape[a]) as i64;
            flat /= self.shape[a];
        }
    }

    fn split(&self, axis: usize) -> (usize, usize, usize) {
        let outer = self.shape[..axis].iter().product();
        let inner = self.shape[axis + 1..].iter().product();
        (outer, self.shape[axis], inner)
    }

    /// `out[ν] = Σ_k f_k · self[2ν + k]` along `axis`.
    pub fn analysis(&self, axis: usize, f: &[f64]) -> Dense {
        let taps = f.len() as i64;
        let lo = self.lo[axis];
        let hi = self.hi(axis);
        let new_lo = div_ceil(lo - (taps - 1), 2);
        let new_hi = div_floor(hi, 2);
        let mut out_lo = self.lo.clone();
        let mut out_shape = self.shape.clone();
        out_lo[axis] = new_lo;
        out_shape[axis] = (new_hi - new_lo + 1).max(0) as usize;
        let mut out = Dense::zeros(out_lo, out_shape);
        let (outer, len, inner) = self.split(axis);
        let out_len = out.shape[axis];
        for o in 0..outer {
            let src = &self.data[o * len * inner..(o + 1) * len * inner];
            let dst = &mut out.data[o * out_len * inner..(o + 1) * out_len * inner];
            for v in 0..out_len {
                let nu = new_lo + v as i64;
                let row = &mut dst[v * inner..(v + 1) * inner];
                for (k, fk) in f.iter().enumerate() {
                    let m = 2 * nu + k as i64 - lo;
                    if m < 0 || m as usize >= len {
                        continue;
                    }
                    let s = &src[m as usize * inner..(m as usize + 1) * inner];
                    for (d, x) in row.iter_mut().zip(s) {
                        *d += fk * x;
                    }
                }
            }
        }
        out
    }

    /// Adjoint of [`Dense::analysis`]: `out[2ν + k] += f_k · self[ν]`.
    pub fn synthesis(&self, axis: usize, f: &[f64]) -> Dense {
        let taps = f.len() as i64;
        let lo = self.lo[axis];
        let new_lo = 2 * lo;
        let new_hi = 2 * self.hi(axis) + taps - 1;
        let mut out_lo = self.lo.clone();
        let mut out_shape = self.shape.clone();
        out_lo[axis] = new_lo;
        out_shape[axis] = (new_hi - new_lo + 1).max(0) as usize;
        let mut out = Dense::zeros(out_lo, out_shape);
        let (outer, len, inner) = self.split(axis);
        let out_len = out.shape[axis];
        for o in 0..outer {
            let src = &self.data[o * len * inner..(o + 1) * len * inner];
            let dst = &mut out.data[o * out_len * inner..(o + 1) * out_len * inner];
            for v in 0..len {
                let s = &src[v * inner..(v + 1) * inner];
                for (k, fk) in f.iter().enumerate() {
                    let m = 2 * v + k;
                    let row = &mut dst[m * inner..(m + 1) * inner];
                    for (d, x) in row.iter_mut().zip(s) {
                        *d += fk * x;
                    }
                }
            }
        }
        out
    }

    /// `out[ν] = Σ_k e_k · self[ν - k]`, `k ∈ [-half, half]`, same box.
    #[cfg(test)]
    pub fn convolve(&self, axis: usize, e: &[f64]) -> Dense {
        let half = (e.len() / 2) as i64;
        let mut out = Dense::zeros(self.lo.clone(), self.shape.clone());
        let (outer, len, inner) = self.split(axis);
        for o in 0..outer {
            let src = &self.data[o * len * inner..(o + 1) * len * inner];
            let dst = &mut out.data[o * len * inner..(o + 1) * len * inner];
            for v in 0..len as i64 {
                let row = &mut dst[v as usize * inner..(v as usize + 1) * inner];
                for (t, ek) in e.iter().enumerate() {
                    if *ek == 0.0 {
                        continue;
                    }
                    let m = v - (t as i64 - half);
                    if m < 0 || m >= len as i64 {
                        continue;
                    }
                    let s = &src[m as usize * inner..(m as usize + 1) * inner];
                    for (d, x) in row.iter_mut().zip(s) {
                        *d += ek * x;
                    }
                }
            }
        }
        out
    }

    /// Apply `(δ + e)^{-1}` along `axis` by the Neumann series
    /// `Σ (-e)^{*t}`, one line at a time and only around the nonzero part of
    /// each line. Terms stop once below `tol` in absolute value; `None`
    /// when `max_terms` is not enough.
    #[allow(clippy::needless_range_loop)]
    pub fn deconvolve_lines(&self, axis: usize, e: &[f64], tol: f64, max_terms: usize) -> Option<Dense> {
        let half = e.len() / 2;
        let (outer, len, inner) = self.split(axis);
        let lines = (0..outer * inner)
            .into_par_iter()
            .map(|id| -> std::result::Result<Option<(usize, usize, Vec<f64>)>, ()> {
                let (o, s) = (id / inner, id % inner);
                let base = o * len * inner + s;
                let at = |i: usize| self.data[base + i * inner];
                let Some(first) = (0..len).find(|&i| at(i) != 0.0) else {
                    return Ok(None);
                };
                let last = (0..len).rev().find(|&i| at(i) != 0.0).unwrap();
                let lo = first.saturating_sub(half * max_terms);
                let hi = (last + half * max_terms).min(len - 1);
                let mut acc: Vec<f64> = (lo..=hi).map(at).collect();
                let mut term = acc.clone();
                let (mut a, mut b) = (first - lo, last - lo);
                let mut next = vec![0.0; acc.len()];
                for _ in 0..max_terms {
                    let (na, nb) = (a.saturating_sub(half), (b + half).min(acc.len() - 1));
                    let mut peak = 0.0f64;
                    for v in na..=nb {
                        let mut sum = 0.0;
                        for (t, ek) in e.iter().enumerate() {
                            let m = v as i64 - (t as i64 - half as i64);
                            if m >= a as i64 && m <= b as i64 {
                                sum += ek * term[m as usize];
                            }
                        }
                        next[v] = -sum;
                        peak = peak.max(sum.abs());
                    }
                    std::mem::swap(&mut term, &mut next);
                    for v in na..=nb {
                        acc[v] += term[v];
                    }
                    a = na;
                    b = nb;
                    if peak <= tol {
                        return Ok(Some((id, lo, acc)));
                    }
                }
                Err(())
            })
            .collect::<std::result::Result<Vec<_>, ()>>()
            .ok()?;
        let mut out = Dense::zeros(self.lo.clone(), self.shape.clone());
        for (id, lo, vals) in lines.into_iter().flatten() {
            let (o, s) = (id / inner, id % inner);
            let base = o * len * inner + s;
            for (k, v) in vals.into_iter().enumerate() {
                out.data[base + (lo + k) * inner] = v;
            }
        }
        Some(out)
    }

    /// Copy into a (larger) box.
    pub fn embed(&self, lo: &[i64], shape: &[usize]) -> Dense {
        let mut out = Dense::zeros(lo.to_vec(), shape.to_vec());
        let mut idx = vec![0; self.dim()];
        for (flat, v) in self.data.iter().enumerate() {
            if *v == 0.0 {
                continue;
            }
            self.index_of(flat, &mut idx);
            let off = out.offset(&idx).expect("embedding box must contain the source");
            out.data[off] = *v;
        }
        out
    }

    pub fn add_assign(&mut self, other: &Dense) {
        debug_assert_eq!(self.lo, other.lo);
        debug_assert_eq!(self.shape, other.shape);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Smallest box containing both.
pub(crate) fn union_box(a: (&[i64], &[usize]), b: (&[i64], &[usize])) -> (Vec<i64>, Vec<usize>) {
    let dim = a.0.len();
    let mut lo = vec![0; dim];
    let mut shape = vec![0; dim];
    for ax in 0..dim {
        let l = a.0[ax].min(b.0[ax]);
        let h = (a.0[ax] + a.1[ax] as i64).max(b.0[ax] + b.1[ax] as i64);
        lo[ax] = l;
        shape[ax] = (h - l) as usize;
    }
    (lo, shape)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analysis_and_synthesis_are_adjoint() {
        let mut a = Dense::zeros(vec![-3, 2], vec![7, 5]);
        for (i, v) in a.data.iter_mut().enumerate() {
            *v = ((i * 37 % 11) as f64 - 5.0) / 3.0;
        }
        let f = [0.3, -1.2, 0.7, 0.25];
        for axis in 0..2 {
            let down = a.analysis(axis, &f);
            let mut b = Dense::zeros(down.lo.clone(), down.shape.clone());
            for (i, v) in b.data.iter_mut().enumerate() {
                *v = (i as f64 * 0.61).sin();
            }
            let lhs: f64 = down.data.iter().zip(&b.data).map(|(x, y)| x * y).sum();
            let up = b.synthesis(axis, &f);
            let mut rhs = 0.0;
            let mut idx = vec![0; 2];
            for (flat, v) in up.data.iter().enumerate() {
                up.index_of(flat, &mut idx);
                if let Some(o) = a.offset(&idx) {
                    rhs += v * a.data[o];
                }
            }
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn line_deconvolution_matches_series() {
        let mut a = Dense::zeros(vec![-20, 0], vec![60, 50]);
        for (i, v) in a.data.iter_mut().enumerate() {
            let (r, c) = (i / 50, i % 50);
            if (20..30).contains(&r) && (10..25).contains(&c) {
                *v = ((i * 7 % 13) as f64 - 6.0) / 5.0;
            }
        }
        let e = [0.01, -0.03, 0.02, 0.05, -0.01];
        for axis in 0..2 {
            let mut acc = a.clone();
            let mut term = a.clone();
            for _ in 0..30 {
                term = term.convolve(axis, &e);
                term.data.iter_mut().for_each(|v| *v = -*v);
                acc.add_assign(&term);
            }
            let fast = a.deconvolve_lines(axis, &e, 1e-18, 30).unwrap();
            let err = acc.data.iter().zip(&fast.data).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
            assert!(err < 1e-15, "axis {axis}: {err}");
        }
        assert!(a.deconvolve_lines(0, &[0.5, 0.5, 0.5], 1e-18, 3).is_none());
    }

    #[test]
    fn convolution_with_delta() {
        let mut a = Dense::zeros(vec![0], vec![5]);
        a.data = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let shifted = a.convolve(0, &[0.0, 0.0, 1.0]);
        assert_eq!(shifted.data, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
    }
}
