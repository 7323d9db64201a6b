use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::system::Factor;
use crate::{Error, Result};

pub type Translation = SmallVec<[i64; 4]>;

/// `(γ, G, μ⃗)`: dilation level, factor types and translation.
///
/// Bit `a` of `flags` set means axis `a` carries `ψ_M`. Ordering is by
/// level, then flags, then translation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WaveletIndex {
    pub gamma: u32,
    pub flags: u32,
    pub mu: Translation,
}

impl WaveletIndex {
    pub fn new(gamma: u32, flags: u32, mu: &[i64]) -> Result<Self> {
        let idx = Self { gamma, flags, mu: SmallVec::from_slice(mu) };
        idx.validate()?;
        Ok(idx)
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        if dim == 0 || dim > 31 {
            return Err(Error::InvalidParameter(format!("index dimension {dim} unsupported")));
        }
        if self.flags >> dim != 0 {
            return Err(Error::InvalidParameter("flags set beyond the index dimension".into()));
        }
        if self.gamma > 0 && self.flags == 0 {
            return Err(Error::InvalidParameter("all-F factors are only part of the basis at level 0".into()));
        }
        Ok(())
    }

    pub fn factor(&self, axis: usize) -> Factor {
        if self.flags >> axis & 1 == 1 {
            Factor::M
        } else {
            Factor::F
        }
    }

    /// `"FM"`-style string, axis 0 first.
    pub fn g_string(&self) -> String {
        (0..self.dim()).map(|a| if self.flags >> a & 1 == 1 { 'M' } else { 'F' }).collect()
    }

    pub fn flags_from_str(g: &str) -> Result<u32> {
        g.chars().enumerate().try_fold(0u32, |acc, (a, c)| match c {
            'F' => Ok(acc),
            'M' => Ok(acc | 1 << a),
            other => Err(Error::Parse(format!("bad factor letter {other:?}"))),
        })
    }

    /// First `n` translation entries (the ξ block).
    pub fn k(&self, n: usize) -> &[i64] {
        &self.mu[..n]
    }

    /// Last entries (the η block).
    pub fn l(&self, n: usize) -> &[i64] {
        &self.mu[n..]
    }
}

impl fmt::Display for WaveletIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.gamma, self.g_string())?;
        for m in &self.mu {
            write!(f, " {m}")?;
        }
        Ok(())
    }
}
