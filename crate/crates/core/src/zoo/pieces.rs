use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::partition::{DyadicPartition, PartitionKind};
use crate::spectral::{norm, Grid, RadialDerivative, Support, Symbol, SymbolRef};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceFlavor {
    Hormander,
    Riesz,
    /// `M_j(ζ) = m_j(2^{-j}ζ)`.
    RieszRescaled,
}

impl PieceFlavor {
    pub fn partition(&self) -> DyadicPartition {
        match self {
            PieceFlavor::Hormander => DyadicPartition::hormander(),
            _ => DyadicPartition::riesz(),
        }
    }
}

/// `m_j = m·ψ_j(|ζ|)`, optionally rescaled.
#[derive(Debug, Clone)]
pub struct AnnularPiece {
    pub j: u32,
    pub flavor: PieceFlavor,
    pub base: SymbolRef,
}

impl AnnularPiece {
    pub fn new(base: SymbolRef, j: u32, flavor: PieceFlavor) -> Self {
        Self { j, flavor, base }
    }

    fn scale(&self) -> f64 {
        match self.flavor {
            PieceFlavor::RieszRescaled => 2f64.powi(-(self.j as i32)),
            _ => 1.0,
        }
    }

    fn unscaled_eval(&self, z: &[f64]) -> Complex64 {
        let p = self.flavor.partition();
        let w = p.piece(self.j, norm(z));
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.base.eval(z) * w
    }

    fn unscaled_radial(&self, z: &[f64]) -> Complex64 {
        let p = self.flavor.partition();
        let rho = norm(z);
        let w = p.piece(self.j, rho);
        let dw = p.piece_radial_derivative(self.j, rho);
        if w == 0.0 && dw == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut out = self.base.eval(z) * dw;
        if w != 0.0 {
            out += self.base.radial_derivative(z) * w;
        }
        out
    }

    fn rescaled(&self, z: &[f64]) -> Vec<f64> {
        let s = self.scale();
        z.iter().map(|v| v * s).collect()
    }
}

impl Symbol for AnnularPiece {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn eval(&self, z: &[f64]) -> Complex64 {
        if self.flavor == PieceFlavor::RieszRescaled {
            self.unscaled_eval(&self.rescaled(z))
        } else {
            self.unscaled_eval(z)
        }
    }

    fn support(&self) -> Support {
        self.flavor.partition().support(self.j).scaled(1.0 / self.scale())
    }

    /// Radial derivatives commute with dilations, so the rescaled piece
    /// reuses the unscaled formula at `2^{-j}ζ`.
    fn radial_derivative(&self, z: &[f64]) -> Complex64 {
        if self.flavor == PieceFlavor::RieszRescaled {
            self.unscaled_radial(&self.rescaled(z))
        } else {
            self.unscaled_radial(z)
        }
    }

    fn decay_exponent(&self) -> Option<f64> {
        self.base.decay_exponent()
    }

    fn name(&self) -> String {
        let tag = match self.flavor {
            PieceFlavor::Hormander => "m",
            PieceFlavor::Riesz => "m",
            PieceFlavor::RieszRescaled => "M",
        };
        format!("{tag}_{}[{}]", self.j, self.base.name())
    }
}

/// Pieces `0..=j_max` of `m`, checked against the grid they will be
/// sampled on.
pub fn dyadic_pieces(m: SymbolRef, flavor: PieceFlavor, j_max: u32, grid: &Grid) -> Result<Vec<AnnularPiece>> {
    if m.dim() != grid.dim() {
        return Err(Error::InvalidGrid("symbol and grid dimensions differ".into()));
    }
    if flavor == PieceFlavor::Riesz || flavor == PieceFlavor::RieszRescaled {
        let width = match flavor {
            PieceFlavor::RieszRescaled => 0.25,
            _ => 2f64.powi(-(j_max as i32) - 2),
        };
        if width / grid.spacing() < 4.0 {
            return Err(Error::Resolution(format!(
                "shell width {width:.3e} of piece {j_max} spans under 4 cells of {:.3e}",
                grid.spacing()
            )));
        }
    }
    Ok((0..=j_max).map(|j| AnnularPiece::new(m.clone(), j, flavor)).collect())
}

/// `ζ·∇m_j` as a symbol.
pub fn radial_derivative_symbol(piece: &AnnularPiece) -> SymbolRef {
    Arc::new(RadialDerivative { inner: Arc::new(piece.clone()) })
}

/// The partition flavour matching a partition kind.
pub fn flavor_for(kind: PartitionKind, rescaled: bool) -> PieceFlavor {
    match (kind, rescaled) {
        (PartitionKind::Hormander, _) => PieceFlavor::Hormander,
        (PartitionKind::Riesz, false) => PieceFlavor::Riesz,
        (PartitionKind::Riesz, true) => PieceFlavor::RieszRescaled,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Constant, FnSymbol};
    use crate::zoo::bochner_riesz_symbol;

    #[test]
    fn constant_symbol_first_piece_is_one_at_origin() {
        let m: SymbolRef = Arc::new(Constant::one(2));
        let grid = Grid::new(2, 64, 20.0).unwrap();
        let pieces = dyadic_pieces(m, PieceFlavor::Hormander, 3, &grid).unwrap();
        assert_eq!(pieces[0].eval(&[0.0, 0.0]).re, 1.0);
    }

    #[test]
    fn pieces_sum_back() {
        let m: SymbolRef = Arc::new(bochner_riesz_symbol(1, 2.0).unwrap());
        let grid = Grid::new(2, 1024, 2.5).unwrap();
        let j_max = 4;
        let pieces = dyadic_pieces(m.clone(), PieceFlavor::Riesz, j_max, &grid).unwrap();
        let covered = DyadicPartition::riesz().covered_radius(j_max);
        for i in 0..500 {
            let rho = covered * i as f64 / 499.0;
            let z = [rho * 0.6, rho * 0.8];
            let sum: Complex64 = pieces.iter().map(|p| p.eval(&z)).sum();
            assert!((sum - m.eval(&z)).norm() < 1e-12);
        }
    }

    #[test]
    fn rescaled_piece_identity() {
        let m: SymbolRef = Arc::new(bochner_riesz_symbol(1, 3.0).unwrap());
        let j = 3;
        let small = AnnularPiece::new(m.clone(), j, PieceFlavor::Riesz);
        let big = AnnularPiece::new(m, j, PieceFlavor::RieszRescaled);
        let s = 8.0;
        for i in 0..100 {
            let t = i as f64 * 0.0731;
            let z = [7.5 * t.cos(), 7.5 * t.sin()];
            let zs = [z[0] / s, z[1] / s];
            assert_eq!(big.eval(&z), small.eval(&zs));
        }
        assert_eq!(big.support(), Support::Annulus { inner: 7.0, outer: 7.75 });
    }

    #[test]
    fn radial_derivative_of_quadratic() {
        let m: SymbolRef = Arc::new(FnSymbol::new(2, "r2", |z| Complex64::new(z[0] * z[0] + z[1] * z[1], 0.0)));
        let piece = AnnularPiece::new(m, 0, PieceFlavor::Hormander);
        let d = radial_derivative_symbol(&piece);
        // ψ_0 ≡ 1 on radius < 2
        let z = [0.6, -0.9];
        assert!((d.eval(&z).re - 2.0 * (0.36 + 0.81)).abs() < 1e-8);
    }

    #[test]
    fn analytic_derivative_matches_difference() {
        let m: SymbolRef = Arc::new(bochner_riesz_symbol(1, 3.0).unwrap());
        for flavor in [PieceFlavor::Riesz, PieceFlavor::RieszRescaled] {
            let piece = AnnularPiece::new(m.clone(), 2, flavor);
            let s = piece.support();
            let (a, b) = (s.inner_radius(), s.outer_radius().unwrap());
            for i in 1..40 {
                let rho = a + (b - a) * i as f64 / 40.0;
                let z = [rho * 0.28, rho * 0.96];
                let up = [z[0] * (1.0 + 1e-6), z[1] * (1.0 + 1e-6)];
                let dn = [z[0] * (1.0 - 1e-6), z[1] * (1.0 - 1e-6)];
                let fd = (piece.eval(&up) - piece.eval(&dn)) / 2e-6;
                let an = piece.radial_derivative(&z);
                assert!((fd - an).norm() < 1e-5, "{fd} {an}");
            }
        }
    }

    #[test]
    fn resolution_guard() {
        let m: SymbolRef = Arc::new(bochner_riesz_symbol(1, 3.0).unwrap());
        let coarse = Grid::new(2, 64, 2.5).unwrap();
        assert!(matches!(dyadic_pieces(m, PieceFlavor::Riesz, 6, &coarse), Err(Error::Resolution(_))));
    }
}
