use proptest::prelude::*;

use bimax::operators::{apply_bilinear, maximal_operator, DilationGrid};
use bimax::spectral::{fft_forward, fft_inverse, lp_norm, Constant, Field, Grid};
use bimax::wavelet::{CoeffTree, WaveletIndex, WaveletSystem};
use bimax::zoo::{bochner_riesz_symbol, diagonal_split, split_part, DyadicPartition, SplitPart};
use bimax::Complex64;

fn field_from(grid: Grid, seed: &[(f64, f64)]) -> Field {
    let values = (0..grid.len()).map(|i| {
        let (a, b) = seed[i % seed.len()];
        Complex64::new(a + 0.1 * (i as f64).sin(), b)
    });
    Field::new(grid, values.collect()).unwrap()
}

fn gaussian_field(grid: Grid, c: f64, w: f64, phase: f64) -> Field {
    Field::from_fn(grid, |x| {
        let r2: f64 = x.iter().map(|v| (v - c) * (v - c)).sum();
        Complex64::from_polar((-std::f64::consts::PI * r2 / (w * w)).exp(), phase * x[0])
    })
}

fn samples() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 1..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fft_round_trip(dim in 1usize..=2, log_n in 2u32..=5, extent in 0.5..40.0f64, s in samples()) {
        let grid = Grid::new(dim, 1 << log_n, extent).unwrap();
        let f = field_from(grid, &s);
        let back = fft_inverse(&fft_forward(&f).unwrap()).unwrap();
        prop_assert!(back.sub(&f).unwrap().max_abs() <= 1e-12 * f.max_abs().max(1.0));
        prop_assert!(back.grid().compatible(&grid));
    }

    #[test]
    fn plancherel(dim in 1usize..=2, log_n in 2u32..=5, extent in 0.5..40.0f64, s in samples()) {
        let grid = Grid::new(dim, 1 << log_n, extent).unwrap();
        let f = field_from(grid, &s);
        let a = lp_norm(&f, 2.0).unwrap();
        let b = lp_norm(&fft_forward(&f).unwrap(), 2.0).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1e-300));
    }

    #[test]
    fn lp_norm_homogeneous_and_subadditive(p in 1.0..6.0f64, c in -4.0..4.0f64, s in samples(), t in samples()) {
        let grid = Grid::new(1, 32, 5.0).unwrap();
        let f = field_from(grid, &s);
        let g = field_from(grid, &t);
        let nf = lp_norm(&f, p).unwrap();
        let scaled = lp_norm(&f.scale(Complex64::new(c, 0.0)), p).unwrap();
        prop_assert!((scaled - c.abs() * nf).abs() <= 1e-10 * (1.0 + nf));
        let sum = lp_norm(&f.add(&g).unwrap(), p).unwrap();
        prop_assert!(sum <= nf + lp_norm(&g, p).unwrap() + 1e-10);
    }

    #[test]
    fn hormander_partition_sums_to_one(j_max in 0u32..10, u in 0.0..1.0f64) {
        let part = DyadicPartition::hormander();
        let rho = u * 2.0 * part.covered_radius(j_max);
        let total: f64 = (0..=j_max).map(|j| part.piece(j, rho)).sum();
        prop_assert!((total - part.partial_sum(j_max, rho)).abs() <= 1e-12);
        if rho <= part.covered_radius(j_max) {
            prop_assert!((total - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn riesz_partition_sums_to_one(j_max in 0u32..12, rho in 0.0..1.0f64) {
        let part = DyadicPartition::riesz();
        let total: f64 = (0..=j_max).map(|j| part.piece(j, rho)).sum();
        prop_assert!((total - part.partial_sum(j_max, rho)).abs() <= 1e-12);
        if rho <= part.covered_radius(j_max) {
            prop_assert!((total - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn pieces_vanish_off_their_support(riesz in any::<bool>(), j in 0u32..10, u in 0.0..1.0f64) {
        let part = if riesz { DyadicPartition::riesz() } else { DyadicPartition::hormander() };
        let rho = if riesz { 1.2 * u } else { u * 2f64.powi(j as i32 + 4) };
        let v = part.piece(j, rho);
        prop_assert!((-1e-15..=1.0 + 1e-15).contains(&v));
        if !part.support(j).contains_radius(rho) {
            prop_assert!(v.abs() <= 1e-15);
        }
    }

    #[test]
    fn split_parts_are_disjoint_and_exhaustive(
        entries in prop::collection::vec((0u32..3, 1u32..4, -200i64..200, -200i64..200), 1..60),
        n_split in 140u64..180,
    ) {
        let sys = WaveletSystem::build(2, 6).unwrap();
        let mut tree = CoeffTree::new(2, None);
        for (g, flags, a, b) in &entries {
            tree.insert(WaveletIndex::new(*g, *flags, &[*a, *b]).unwrap(), 1.0).unwrap();
        }
        let split = diagonal_split(&tree, &sys, n_split).unwrap();
        prop_assert_eq!(split.m1.len() + split.m2.len() + split.m3.len(), tree.len());
        for (part, sub) in [(SplitPart::M1, &split.m1), (SplitPart::M2, &split.m2), (SplitPart::M3, &split.m3)] {
            for idx in sub.keys() {
                prop_assert_eq!(split_part(idx, n_split), part);
            }
        }
    }

    #[test]
    fn coefficient_text_round_trip(
        entries in prop::collection::vec((0u32..4, 0u32..4, -50i64..50, -50i64..50, -1e3..1e3f64), 1..30),
    ) {
        let mut tree = CoeffTree::new(2, None);
        for (g, flags, a, b, v) in &entries {
            let flags = if *g == 0 { *flags } else { (*flags).max(1) };
            tree.insert(WaveletIndex::new(*g, flags, &[*a, *b]).unwrap(), *v).unwrap();
        }
        let back = CoeffTree::from_text(&tree.to_text(), None).unwrap();
        prop_assert_eq!(back.len(), tree.len());
        for (k, v) in tree.iter() {
            prop_assert_eq!(back.get(k), v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bilinear_in_each_argument(
        a in -2.0..2.0f64, b in -2.0..2.0f64, t in 0.3..3.0f64,
        c1 in -2.0..2.0f64, c2 in -2.0..2.0f64, w in 0.7..1.5f64,
    ) {
        let grid = Grid::new(1, 64, 16.0).unwrap();
        let m = bochner_riesz_symbol(1, 2.0).unwrap();
        let f1 = gaussian_field(grid, c1, w, 1.0);
        let f2 = gaussian_field(grid, c2, 1.0, -0.5);
        let g = gaussian_field(grid, 0.0, w, 0.3);
        let (ca, cb) = (Complex64::new(a, 0.0), Complex64::new(0.0, b));
        let combo = f1.scale(ca).add(&f2.scale(cb)).unwrap();
        let lhs = apply_bilinear(&m, &combo, &g, t).unwrap();
        let rhs = apply_bilinear(&m, &f1, &g, t).unwrap().scale(ca)
            .add(&apply_bilinear(&m, &f2, &g, t).unwrap().scale(cb)).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-12 * (1.0 + rhs.max_abs()));
        let swapped = apply_bilinear(&m, &g, &combo, t).unwrap();
        let rhs2 = apply_bilinear(&m, &g, &f1, t).unwrap().scale(ca)
            .add(&apply_bilinear(&m, &g, &f2, t).unwrap().scale(cb)).unwrap();
        prop_assert!(swapped.sub(&rhs2).unwrap().max_abs() <= 1e-12 * (1.0 + rhs2.max_abs()));
    }

    #[test]
    fn identity_symbol_gives_the_product(t in 0.01..50.0f64, c in -2.0..2.0f64, w in 0.6..2.0f64) {
        let grid = Grid::new(1, 128, 24.0).unwrap();
        let f = gaussian_field(grid, c, w, 2.0);
        let g = gaussian_field(grid, 0.0, 1.0, -1.0);
        let s = apply_bilinear(&Constant::one(2), &f, &g, t).unwrap();
        prop_assert!(s.rel_sup_diff(&f.mul(&g).unwrap()).unwrap() <= 1e-10);
    }

    #[test]
    fn maximal_dominates_each_dilate(t_min in 0.2..1.0f64, octaves in 1.0..4.0f64, per in 1usize..6) {
        let grid = Grid::new(1, 64, 16.0).unwrap();
        let m = bochner_riesz_symbol(1, 1.0).unwrap();
        let f = gaussian_field(grid, 0.5, 1.0, 1.0);
        let g = gaussian_field(grid, -0.5, 1.2, 0.0);
        let tg = DilationGrid::log_spaced(t_min, t_min * 2f64.powf(octaves), per).unwrap();
        let vals = tg.values();
        prop_assert!(vals.windows(2).all(|w| w[0] < w[1]));
        let r = maximal_operator(&m, &f, &g, &tg, true).unwrap();
        for field in r.per_t.as_ref().unwrap() {
            for (mx, v) in r.maximal.values().iter().zip(field.values()) {
                prop_assert!(mx.re + 1e-15 >= v.norm());
            }
        }
    }
}
