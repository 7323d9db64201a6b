use std::collections::BTreeMap;
use std::fmt::Write as _;

use smallvec::SmallVec;

use super::index::WaveletIndex;
use crate::{Error, Result};

/// Entries with smaller modulus are never stored.
pub const ZERO_CUTOFF: f64 = 1e-15;

/// Sparse coefficients `a_ω = ⟨m, ω⟩` of one symbol.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoeffTree {
    /// Annular piece the coefficients came from, when known.
    pub j: Option<u32>,
    dim: usize,
    entries: BTreeMap<WaveletIndex, f64>,
}

impl CoeffTree {
    pub fn new(dim: usize, j: Option<u32>) -> Self {
        Self { j, dim, entries: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Store `value`, or drop the entry if it is below [`ZERO_CUTOFF`].
    pub fn insert(&mut self, idx: WaveletIndex, value: f64) -> Result<()> {
        if idx.dim() != self.dim {
            return Err(Error::InvalidParameter(format!(
                "index of dimension {} in a {}-dimensional tree",
                idx.dim(),
                self.dim
            )));
        }
        if value.abs() < ZERO_CUTOFF {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, value);
        }
        Ok(())
    }

    pub fn get(&self, idx: &WaveletIndex) -> f64 {
        self.entries.get(idx).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WaveletIndex, f64)> {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &WaveletIndex> {
        self.entries.keys()
    }

    pub fn max_gamma(&self) -> Option<u32> {
        self.entries.keys().map(|k| k.gamma).max()
    }

    pub fn sup_norm(&self) -> f64 {
        self.entries.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `(Σ|a|^r)^{1/r}`.
    pub fn lr_norm(&self, r: f64) -> f64 {
        if r.is_infinite() {
            return self.sup_norm();
        }
        self.entries.values().map(|v| v.abs().powf(r)).sum::<f64>().powf(1.0 / r)
    }

    pub fn energy(&self) -> f64 {
        self.entries.values().map(|v| v * v).sum()
    }

    /// Largest modulus at each level `0..=max_gamma`.
    pub fn level_sups(&self) -> Vec<f64> {
        let top = match self.max_gamma() {
            Some(g) => g as usize,
            None => return Vec::new(),
        };
        let mut out = vec![0.0f64; top + 1];
        for (k, v) in &self.entries {
            let s = &mut out[k.gamma as usize];
            *s = s.max(v.abs());
        }
        out
    }

    /// Keep entries satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&WaveletIndex, f64) -> bool) -> CoeffTree {
        let entries = self.entries.iter().filter(|(k, v)| keep(k, **v)).map(|(k, v)| (k.clone(), *v)).collect();
        CoeffTree { j: self.j, dim: self.dim, entries }
    }

    /// One line per entry: `gamma G mu... value`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k} {v:e}");
        }
        s
    }

    pub fn from_text(text: &str, j: Option<u32>) -> Result<CoeffTree> {
        let mut tree: Option<CoeffTree> = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("line {}: {what}", lineno + 1));
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() < 4 {
                return Err(bad("expected gamma, factors, translation and value"));
            }
            let gamma: u32 = parts[0].parse().map_err(|_| bad("bad level"))?;
            let g = parts[1];
            let dim = g.len();
            if parts.len() != dim + 3 {
                return Err(bad("translation length does not match factor string"));
            }
            let flags = WaveletIndex::flags_from_str(g)?;
            let mu: SmallVec<[i64; 4]> = parts[2..2 + dim]
                .iter()
                .map(|p| p.parse().map_err(|_| bad("bad translation")))
                .collect::<Result<_>>()?;
            let value: f64 = parts[2 + dim].parse().map_err(|_| bad("bad value"))?;
            let idx = WaveletIndex { gamma, flags, mu };
            idx.validate().map_err(|e| bad(&e.to_string()))?;
            tree.get_or_insert_with(|| CoeffTree::new(dim, j)).insert(idx, value)?;
        }
        tree.ok_or_else(|| Error::Parse("no entries".into()))
    }

    pub(crate) fn from_map(dim: usize, j: Option<u32>, entries: BTreeMap<WaveletIndex, f64>) -> Self {
        Self { j, dim, entries }
    }
}
