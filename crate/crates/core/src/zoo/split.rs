use serde::Serialize;

use crate::wavelet::{CoeffTree, WaveletIndex, WaveletSystem};
use crate::{Error, Result};

/// Coefficients split by the size of the translations `k` (ξ block) and
/// `l` (η block).
#[derive(Debug, Clone)]
pub struct DiagonalSplit {
    /// `|k| > N` and `|l| > N`.
    pub m1: CoeffTree,
    /// `|l| ≤ N`.
    pub m2: CoeffTree,
    /// `|l| > N`, `|k| ≤ N`.
    pub m3: CoeffTree,
    pub n_split: u64,
    pub support_diameter: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SplitPart {
    M1,
    M2,
    M3,
}

fn euclid(v: &[i64]) -> f64 {
    v.iter().map(|x| (*x as f64).powi(2)).sum::<f64>().sqrt()
}

/// Part of the split an index belongs to.
pub fn split_part(idx: &WaveletIndex, n_split: u64) -> SplitPart {
    let n = idx.dim() / 2;
    let cut = n_split as f64;
    if euclid(idx.l(n)) <= cut {
        SplitPart::M2
    } else if euclid(idx.k(n)) <= cut {
        SplitPart::M3
    } else {
        SplitPart::M1
    }
}

/// Split a tree in `2n` variables; requires `N > 10·d` with `d` the
/// diameter of a level-0 tensor wavelet.
pub fn diagonal_split(coeffs: &CoeffTree, sys: &WaveletSystem, n_split: u64) -> Result<DiagonalSplit> {
    let dim = coeffs.dim();
    if dim == 0 || !dim.is_multiple_of(2) {
        return Err(Error::InvalidSplit(format!("tree dimension {dim} is not 2n")));
    }
    let d = sys.support_diameter(dim);
    if n_split as f64 <= 10.0 * d {
        return Err(Error::InvalidSplit(format!("N = {n_split} must exceed 10·d = {}", 10.0 * d)));
    }
    let part = |p: SplitPart| coeffs.filter(|idx, _| split_part(idx, n_split) == p);
    Ok(DiagonalSplit {
        m1: part(SplitPart::M1),
        m2: part(SplitPart::M2),
        m3: part(SplitPart::M3),
        n_split,
        support_diameter: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys() -> WaveletSystem {
        WaveletSystem::build(2, 8).unwrap()
    }

    #[test]
    fn rejects_small_split() {
        let t = CoeffTree::new(2, None);
        let s = sys();
        let d = s.support_diameter(2);
        assert!(diagonal_split(&t, &s, (10.0 * d).floor() as u64).is_err());
        assert!(diagonal_split(&t, &s, (10.0 * d).floor() as u64 + 1).is_ok());
        assert!(diagonal_split(&CoeffTree::new(3, None), &s, 1000).is_err());
    }

    #[test]
    fn l_zero_goes_to_m2() {
        let mut t = CoeffTree::new(2, None);
        for k in -500..500 {
            t.insert(WaveletIndex::new(1, 1, &[k, 0]).unwrap(), 1.0).unwrap();
        }
        let s = diagonal_split(&t, &sys(), 100).unwrap();
        assert_eq!(s.m2.len(), 1000);
        assert!(s.m1.is_empty() && s.m3.is_empty());
    }

    #[test]
    fn far_corner_goes_to_m1() {
        let mut t = CoeffTree::new(2, None);
        t.insert(WaveletIndex::new(0, 0, &[200, -200]).unwrap(), 0.5).unwrap();
        let s = diagonal_split(&t, &sys(), 100).unwrap();
        assert_eq!(s.m1.len(), 1);
        assert!(s.m2.is_empty() && s.m3.is_empty());
    }
}
