use serde::{Deserialize, Serialize};

/// Exponents of the limited-decay class and of the Sobolev piece bounds.
///
/// Out-of-range values are recorded as warnings and never rejected, so the
/// failure region can be explored on purpose.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayClassParams {
    pub n: usize,
    pub a: f64,
    pub derivative_order_checked: usize,
    pub lambda: f64,
    pub r: f64,
    pub s: f64,
    pub warnings: Vec<String>,
}

impl DecayClassParams {
    pub fn new(n: usize, a: f64, lambda: f64, r: f64, s: f64) -> Self {
        let nf = n as f64;
        let mut warnings = Vec::new();
        if a <= nf / 2.0 + 1.0 {
            warnings.push(format!("a = {a} does not exceed n/2 + 1 = {}", nf / 2.0 + 1.0));
        }
        if lambda <= 1.0 {
            warnings.push(format!("lambda = {lambda} does not exceed 1"));
        }
        if !(r > 1.0 && r <= 4.0) {
            warnings.push(format!("r = {r} lies outside (1, 4]"));
        }
        if s <= 2.0 * nf / r + 1.0 {
            warnings.push(format!("s = {s} does not exceed 2n/r + 1 = {}", 2.0 * nf / r + 1.0));
        }
        Self { n, a, derivative_order_checked: n / 2 + 2, lambda, r, s, warnings }
    }

    pub fn in_hypotheses(&self) -> bool {
        self.warnings.is_empty()
    }
}
