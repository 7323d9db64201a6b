use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde_json::json;

use bimax::harness::{
    band_constant, bessel_identity_check, bochner_riesz_radial_integral, circle_transform, convergence_study,
    norm_ratio_estimate, piece_norm_slope, radial_lp_norm, sphere_area, summed_bound, Comparison, DecayFitReport,
    TrialEnsemble, CIRCLE_NODES,
};
use bimax::operators::{
    effective_range, hl_maximal, joint_band, kernel, kernel_decay_fit, maximal_with, square_functions, BilinearInputs,
    DilationGrid, DEFAULT_PER_OCTAVE,
};
use bimax::spectral::{lp_norm, sample, sobolev_norm, Constant, Field, Gaussian, Grid, Support, SymbolRef};
use bimax::wavelet::{analyze, analyze_detailed, coeff_decay_profile, reconstruct, AnalyzeOptions, WaveletSystem};
use bimax::zoo::{bochner_riesz_symbol, bump_symbol, m_alpha_symbol, AnnularPiece, BesselSymbol};
use bimax::Complex64;

use crate::config::{DilationSpec, ExperimentConfig, GaussianSpec, GridSpec, InputSpec, Kind, SymbolSpec};
use crate::report::{Check, ExperimentReport};
use crate::CliError;

type Res<T> = Result<T, CliError>;

pub fn build_symbol(spec: &SymbolSpec) -> Res<SymbolRef> {
    if spec.n() == 0 {
        return Err(CliError::Config("symbol dimension n must be at least 1".into()));
    }
    Ok(match *spec {
        SymbolSpec::Identity { n } => Arc::new(Constant::one(2 * n)),
        SymbolSpec::BochnerRiesz { n, lambda } => Arc::new(bochner_riesz_symbol(n, lambda)?),
        SymbolSpec::MAlpha { n, alpha } => Arc::new(m_alpha_symbol(n, alpha)?),
        SymbolSpec::Gaussian { n, width } => {
            if !(width > 0.0) {
                return Err(CliError::Config(format!("gaussian width must be positive, got {width}")));
            }
            Arc::new(Gaussian { dim: 2 * n, width })
        }
        SymbolSpec::Bump { n, radius } => Arc::new(bump_symbol(2 * n, radius)?),
    })
}

fn grid(spec: Option<GridSpec>, dim: usize) -> Res<Grid> {
    let g = spec.ok_or_else(|| CliError::Config("missing `grid`".into()))?;
    Ok(Grid::new(dim, g.points, g.extent)?)
}

fn symbol(cfg: &ExperimentConfig) -> Res<(&SymbolSpec, SymbolRef)> {
    let spec = cfg.symbol.as_ref().ok_or_else(|| CliError::Config("missing `symbol`".into()))?;
    Ok((spec, build_symbol(spec)?))
}

fn lambda_of(spec: &SymbolSpec, what: &str) -> Res<f64> {
    spec.lambda().ok_or_else(|| CliError::Config(format!("{what} needs a bochner-riesz symbol")))
}

fn pieces(cfg: &ExperimentConfig, base: &SymbolRef) -> Res<Vec<AnnularPiece>> {
    let p = cfg.pieces.as_ref().ok_or_else(|| CliError::Config("missing `pieces`".into()))?;
    if p.j_min > p.j_max {
        return Err(CliError::Config(format!("pieces: j_min {} exceeds j_max {}", p.j_min, p.j_max)));
    }
    Ok(p.js().map(|j| AnnularPiece::new(base.clone(), j, p.flavor)).collect())
}

fn sections(cfg: &ExperimentConfig) -> Vec<&'static str> {
    let mut s = Vec::new();
    let mut add = |present: bool, name| {
        if present {
            s.push(name)
        }
    };
    add(cfg.symbol.is_some(), "symbol");
    add(cfg.pieces.is_some(), "pieces");
    add(cfg.grid.is_some(), "grid");
    add(cfg.wavelet.is_some(), "wavelet");
    add(cfg.dilation.is_some(), "dilation");
    add(cfg.inputs.is_some(), "inputs");
    add(cfg.norm.is_some(), "norm");
    add(cfg.decay.is_some(), "decay");
    add(cfg.window.is_some(), "window");
    add(cfg.radii.is_some(), "radii");
    add(cfg.oracle_points.is_some(), "oracle_points");
    add(cfg.probe_points.is_some(), "probe_points");
    add(cfg.majorize, "majorize");
    s
}

fn allowed(kind: Kind) -> &'static [&'static str] {
    match kind {
        Kind::Decompose => &["symbol", "pieces", "grid", "wavelet", "norm"],
        Kind::WaveletDecay => &["symbol", "pieces", "wavelet", "decay"],
        Kind::Maximal => &["symbol", "grid", "dilation", "inputs", "majorize"],
        Kind::Gfunction => &["symbol", "pieces", "grid", "dilation", "inputs", "probe_points"],
        Kind::KernelDecay => &["symbol", "grid", "window"],
        Kind::Convergence => &["symbol", "grid", "dilation", "inputs", "oracle_points"],
        Kind::BesselCheck => &["radii"],
        Kind::NormRatio => &["symbol", "pieces", "grid", "dilation", "inputs"],
    }
}

fn required(kind: Kind) -> &'static [&'static str] {
    match kind {
        Kind::Decompose => &["symbol"],
        Kind::WaveletDecay => &["symbol", "wavelet"],
        Kind::Maximal => &["symbol", "grid", "inputs"],
        Kind::Gfunction => &["symbol", "grid", "inputs"],
        Kind::KernelDecay => &["symbol", "grid", "window"],
        Kind::Convergence => &["symbol", "grid", "dilation", "inputs"],
        Kind::BesselCheck => &["radii"],
        Kind::NormRatio => &["symbol", "grid", "inputs"],
    }
}

/// Structural checks and parameter construction, without running anything.
pub fn validate(cfg: &ExperimentConfig) -> Res<()> {
    let present = sections(cfg);
    let ctx = |msg: String| CliError::Config(format!("experiment `{}`: {msg}", cfg.name));
    for s in &present {
        if !allowed(cfg.kind).contains(s) {
            return Err(ctx(format!("`{s}` is not used by kind {}", cfg.kind.label())));
        }
    }
    for s in required(cfg.kind) {
        if !present.contains(s) {
            return Err(ctx(format!("kind {} requires `{s}`", cfg.kind.label())));
        }
    }
    if cfg.name.is_empty() || cfg.name.contains(['/', '\\']) || cfg.name.starts_with('.') {
        return Err(ctx("names must be nonempty plain file stems".into()));
    }
    let base = cfg.symbol.as_ref().map(build_symbol).transpose().map_err(|e| e.context(&cfg.name))?;
    if let (Some(base), Some(_)) = (&base, &cfg.pieces) {
        pieces(cfg, base).map_err(|e| e.context(&cfg.name))?;
    }
    let n = cfg.symbol.as_ref().map_or(1, SymbolSpec::n);
    match cfg.kind {
        Kind::Decompose => {
            if cfg.pieces.is_some() != cfg.norm.is_some() {
                return Err(ctx("`pieces` and `norm` go together".into()));
            }
            if cfg.pieces.is_none() && cfg.wavelet.is_none() {
                return Err(ctx("decompose needs `pieces` with `norm`, or `wavelet`".into()));
            }
            if let Some(norm) = cfg.norm {
                if !(norm.p >= 1.0) || !(norm.smoothness_s >= 0.0) {
                    return Err(ctx(format!("bad norm p = {}, s = {}", norm.p, norm.smoothness_s)));
                }
                if norm.smoothness_s > 0.0 && cfg.grid.is_none() {
                    return Err(ctx("Sobolev norms need a frequency `grid`".into()));
                }
                let spec = cfg.symbol.as_ref().unwrap();
                lambda_of(spec, "piece-norm slopes").map_err(|e| e.context(&cfg.name))?;
                piece_norm_slope(cfg.pieces.as_ref().unwrap().flavor, 1.0, n, norm.p)
                    .map_err(|e| CliError::from(e).context(&cfg.name))?;
            }
            if let Some(g) = cfg.grid {
                grid(Some(g), 2 * n)?;
            }
        }
        Kind::WaveletDecay => {
            let w = cfg.wavelet.as_ref().unwrap();
            WaveletSystem::build(w.order, w.resolution).map_err(|e| CliError::from(e).context(&cfg.name))?;
            if cfg.pieces.is_some() {
                let spec = cfg.symbol.as_ref().unwrap();
                lambda_of(spec, "piece decay").map_err(|e| e.context(&cfg.name))?;
                if cfg.decay.is_none() {
                    return Err(ctx("piece decay needs `decay` (r, smoothness_s)".into()));
                }
            } else if cfg.decay.is_some() {
                return Err(ctx("`decay` only applies to pieces".into()));
            }
        }
        Kind::KernelDecay => {
            grid(cfg.grid, 2 * n)?;
            lambda_of(cfg.symbol.as_ref().unwrap(), "kernel decay").map_err(|e| e.context(&cfg.name))?;
        }
        Kind::Convergence => {
            grid(cfg.grid, n)?;
            lambda_of(cfg.symbol.as_ref().unwrap(), "convergence").map_err(|e| e.context(&cfg.name))?;
            if !matches!(cfg.inputs, Some(InputSpec::Gaussian { .. })) {
                return Err(ctx("convergence needs gaussian inputs".into()));
            }
            if cfg.dilation.as_ref().and_then(|d| d.values.as_ref()).is_none() {
                return Err(ctx("convergence needs `dilation.values`".into()));
            }
        }
        Kind::BesselCheck => {
            let r = cfg.radii.as_ref().unwrap();
            if !(r.min >= 0.0) || !(r.max >= r.min) || r.count == 0 {
                return Err(ctx(format!("bad radii [{}, {}] x {}", r.min, r.max, r.count)));
            }
        }
        Kind::Maximal | Kind::Gfunction | Kind::NormRatio => {
            let g = grid(cfg.grid, n)?;
            inputs_for(cfg.inputs.as_ref().unwrap(), g, 0)?;
            if cfg.kind == Kind::NormRatio && !matches!(cfg.inputs, Some(InputSpec::Random { .. })) {
                return Err(ctx("norm ratios need random inputs".into()));
            }
            if cfg.kind == Kind::Gfunction {
                if let Some(p) = &cfg.pieces {
                    if p.j_min != p.j_max {
                        return Err(ctx("g-functions take a single piece (j_min = j_max)".into()));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Input pairs: random ones keep their ensemble, Gaussians come as one pair.
enum Inputs {
    Random(TrialEnsemble),
    Fixed(Field, Field),
}

impl Inputs {
    fn count(&self) -> usize {
        match self {
            Inputs::Random(e) => e.count,
            Inputs::Fixed(..) => 1,
        }
    }

    fn pair(&self, i: usize) -> Res<(Field, Field)> {
        match self {
            Inputs::Random(e) => Ok(e.pair(i)?),
            Inputs::Fixed(f, g) => Ok((f.clone(), g.clone())),
        }
    }

    fn band(&self) -> Option<(f64, f64)> {
        match self {
            Inputs::Random(e) => Some(joint_band(e.band_f, e.band_g)),
            Inputs::Fixed(..) => None,
        }
    }
}

fn gaussian_field(grid: Grid, s: GaussianSpec) -> Res<Field> {
    if !(s.width > 0.0) {
        return Err(CliError::Config(format!("gaussian input width must be positive, got {}", s.width)));
    }
    Ok(Field::from_fn(grid, move |x| {
        let r2: f64 = x.iter().enumerate().map(|(a, v)| if a == 0 { (v - s.center).powi(2) } else { v * v }).sum();
        Complex64::from_polar(
            (-std::f64::consts::PI * r2 / (s.width * s.width)).exp(),
            2.0 * std::f64::consts::PI * s.frequency * x[0],
        )
    }))
}

fn inputs_for(spec: &InputSpec, grid: Grid, seed: u64) -> Res<Inputs> {
    match spec {
        InputSpec::Random { count, band_f, band_g } => {
            if *count == 0 {
                return Err(CliError::Config("random inputs need count ≥ 1".into()));
            }
            Ok(Inputs::Random(TrialEnsemble::new(seed, *count, grid, *band_f, *band_g)?))
        }
        InputSpec::Gaussian { f, g } => Ok(Inputs::Fixed(gaussian_field(grid, *f)?, gaussian_field(grid, *g)?)),
    }
}

/// Dilations from the config, with missing ends taken from where the
/// annular `support` meets `band`.
fn dilations(
    spec: Option<&DilationSpec>,
    support: Support,
    band: Option<(f64, f64)>,
    midpoint: bool,
) -> Res<DilationGrid> {
    let default = DilationSpec { t_min: None, t_max: None, per_octave: None, count: None, values: None };
    let d = spec.unwrap_or(&default);
    if let Some(v) = &d.values {
        if midpoint {
            return Err(CliError::Config("midpoint rules need a range, not `values`".into()));
        }
        return Ok(DilationGrid::from_values(v.clone())?);
    }
    let inferred = match band {
        Some(b) => effective_range(support, b).ok(),
        None => None,
    };
    let lo = d.t_min.or(inferred.map(|r| r.0));
    let hi = d.t_max.or(inferred.map(|r| r.1));
    let (lo, hi) = match (lo, hi) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(CliError::Config(
                "dilation range needs t_min and t_max (or an annular symbol with random inputs)".into(),
            ))
        }
    };
    if midpoint {
        Ok(DilationGrid::midpoints(lo, hi, d.count.unwrap_or(256))?)
    } else if let Some(c) = d.count {
        Ok(DilationGrid::with_count(lo, hi, c)?)
    } else {
        Ok(DilationGrid::log_spaced(lo, hi, d.per_octave.unwrap_or(DEFAULT_PER_OCTAVE))?)
    }
}

pub fn run(cfg: &ExperimentConfig, seed: u64) -> Res<ExperimentReport> {
    let mut rep = ExperimentReport::new(&cfg.name, cfg.kind.label());
    match cfg.kind {
        Kind::Decompose => decompose(cfg, &mut rep)?,
        Kind::WaveletDecay => wavelet_decay(cfg, &mut rep)?,
        Kind::Maximal => maximal(cfg, seed, &mut rep)?,
        Kind::Gfunction => gfunction(cfg, seed, &mut rep)?,
        Kind::KernelDecay => kernel_decay(cfg, &mut rep)?,
        Kind::Convergence => convergence(cfg, &mut rep)?,
        Kind::BesselCheck => bessel(cfg, &mut rep)?,
        Kind::NormRatio => norm_ratio(cfg, seed, &mut rep)?,
    }
    if !cfg.dump_fields {
        rep.fields.clear();
    }
    Ok(rep)
}

fn decompose(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Res<()> {
    let (spec, m) = symbol(cfg)?;
    let n = spec.n();
    let tol = &cfg.tolerances;
    let mut details = serde_json::Map::new();
    if let Some(norm) = cfg.norm {
        let lambda = lambda_of(spec, "piece-norm slopes")?;
        let flavor = cfg.pieces.as_ref().unwrap().flavor;
        if norm.p == 2.0 && norm.smoothness_s == 0.0 {
            let quad = radial_lp_norm(m.as_ref(), 2.0, 64)?.powi(2);
            let exact = sphere_area(2 * n) * bochner_riesz_radial_integral(n, lambda);
            let rel = (quad - exact).abs() / exact;
            details.insert(
                "full_norm_sq".into(),
                json!({"quadrature": quad, "closed_form": exact, "relative_error": rel}),
            );
            rep.check(Check::at_most("full-symbol L2 norm vs closed form", rel, tol.oracle.unwrap_or(1e-6)));
        }
        let freq = cfg.grid.map(|g| grid(Some(g), 2 * n)).transpose()?;
        let mut xs = Vec::new();
        let mut values = Vec::new();
        rep.csv.push_str("j,norm\n");
        for piece in pieces(cfg, &m)? {
            let v = if norm.smoothness_s == 0.0 {
                radial_lp_norm(&piece, norm.p, 64)?
            } else {
                sobolev_norm(&piece, freq.as_ref().unwrap(), norm.p, norm.smoothness_s)?
            };
            rep.csv.push_str(&format!("{},{v:e}\n", piece.j));
            xs.push(piece.j as f64);
            values.push(v);
        }
        let predicted = piece_norm_slope(flavor, lambda, n, norm.p)?;
        let fit = DecayFitReport::fit("j", &xs, &values, predicted, tol.slope.unwrap_or(0.3), Comparison::Within)?;
        rep.fit("piece-norm j-slope", fit);
    }
    if let Some(w) = &cfg.wavelet {
        let sys = WaveletSystem::build(w.order, w.resolution)?;
        let a = analyze_detailed(m.as_ref(), &sys, AnalyzeOptions::new(w.gamma_max).with_quad_level(w.quad_level))?;
        let sups = a.tree.level_sups();
        details.insert(
            "wavelet".into(),
            json!({"coefficients": a.tree.len(), "norm_sq": a.norm_sq, "tail_energy": a.tail_energy, "level_sups": sups}),
        );
        if rep.csv.is_empty() {
            rep.csv.push_str("gamma,sup\n");
            for (g, s) in sups.iter().enumerate() {
                rep.csv.push_str(&format!("{g},{s:e}\n"));
            }
        }
        if let Some(rg) = w.reconstruct {
            let g = grid(Some(rg), 2 * n)?;
            let rec = reconstruct(&a.tree, &sys, &g)?;
            let orig = sample(m.as_ref(), &g)?;
            let err = lp_norm(&rec.sub(&orig)?, 2.0)? / lp_norm(&orig, 2.0)?;
            details.insert("reconstruction_relative_l2".into(), json!(err));
            rep.check(Check::below("relative L2 reconstruction error", err, tol.reconstruction.unwrap_or(5e-3)));
            rep.fields.push(("reconstruction".into(), rec));
        }
    }
    rep.details = serde_json::Value::Object(details);
    Ok(())
}

fn wavelet_decay(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Res<()> {
    let (spec, m) = symbol(cfg)?;
    let n = spec.n();
    let w = cfg.wavelet.as_ref().unwrap();
    let sys = WaveletSystem::build(w.order, w.resolution)?;
    let opts = AnalyzeOptions::new(w.gamma_max).with_quad_level(w.quad_level);
    if cfg.pieces.is_some() {
        let lambda = lambda_of(spec, "piece decay")?;
        let d = cfg.decay.unwrap();
        let mut trees = Vec::new();
        for piece in pieces(cfg, &m)? {
            trees.push(analyze(&piece, &sys, opts.for_piece(piece.j))?);
        }
        let tol = cfg.tolerances.slope.unwrap_or(0.3);
        let profile = coeff_decay_profile(&trees, d.r, d.smoothness_s, n, lambda, tol, d.gamma_cap)?;
        rep.csv.push_str("j,gamma,sup\n");
        for (j, g, s) in &profile.cells {
            rep.csv.push_str(&format!("{j},{g},{s:e}\n"));
        }
        rep.details = json!({
            "j_slopes_by_gamma": profile.j_slopes_by_gamma,
            "gamma_slopes_by_j": profile.gamma_slopes_by_j,
            "band_constant": band_constant(&sys, n),
        });
        rep.fit("coefficient j-slope", profile.j_fit);
        rep.fit("coefficient gamma-slope", profile.gamma_fit);
    } else {
        let tree = analyze(m.as_ref(), &sys, opts)?;
        // all-F scaling coefficients carry no cancellation
        let sups = tree.filter(|i, _| i.flags != 0).level_sups();
        let xs: Vec<f64> = (0..sups.len()).map(|g| g as f64).collect();
        rep.csv.push_str("gamma,sup\n");
        for (g, s) in sups.iter().enumerate() {
            rep.csv.push_str(&format!("{g},{s:e}\n"));
        }
        let predicted = -((w.order + n) as f64);
        let tol = cfg.tolerances.gamma_slope.or(cfg.tolerances.slope).unwrap_or(0.5);
        let fit = DecayFitReport::fit("gamma", &xs, &sups, predicted, tol, Comparison::AtMost)?;
        rep.details = json!({"coefficients": tree.len()});
        rep.fit("wavelet sup-coefficient gamma-slope", fit);
    }
    Ok(())
}

fn maximal(cfg: &ExperimentConfig, seed: u64, rep: &mut ExperimentReport) -> Res<()> {
    let (spec, m) = symbol(cfg)?;
    let g = grid(cfg.grid, spec.n())?;
    let inputs = inputs_for(cfg.inputs.as_ref().unwrap(), g, seed)?;
    let tg = dilations(cfg.dilation.as_ref(), m.support(), inputs.band(), false)?;
    let identity = matches!(spec, SymbolSpec::Identity { .. });
    let mut trials = Vec::new();
    let mut worst_identity = 0.0f64;
    let mut worst_ratio = 0.0f64;
    let mut constants = Vec::new();
    rep.csv.push_str("trial,t,l1\n");
    for i in 0..inputs.count() {
        let (f, gg) = inputs.pair(i)?;
        let bi = BilinearInputs::new(&f, &gg)?;
        let r = maximal_with(&bi, m.as_ref(), &tg, false)?;
        rep.warn(r.warnings.iter().cloned());
        for row in r.rows() {
            rep.csv.push_str(&format!("{i},{:e},{:e}\n", row.t, row.l1));
        }
        let norms = lp_norm(&f, 2.0)? * lp_norm(&gg, 2.0)?;
        let ratio = lp_norm(&r.maximal, 1.0)? / norms;
        worst_ratio = worst_ratio.max(ratio);
        let mut trial = json!({"l1_ratio": ratio});
        if identity {
            let prod = f.mul(&gg)?;
            let peak = prod.max_abs();
            let dev =
                r.maximal.values().iter().zip(prod.values()).map(|(a, b)| (a.re - b.norm()).abs()).fold(0.0, f64::max);
            worst_identity = worst_identity.max(dev / peak);
        }
        if cfg.majorize {
            let mf = hl_maximal(&f)?;
            let mg = hl_maximal(&gg)?;
            let c = r
                .maximal
                .values()
                .iter()
                .zip(mf.values().iter().zip(mg.values()))
                .map(|(a, (x, y))| a.re / (x.re * y.re))
                .fold(0.0, f64::max);
            trial["c_emp"] = json!(c);
            constants.push(c);
        }
        trials.push(trial);
        if i == 0 {
            rep.fields.push(("maximal".into(), r.maximal));
        }
    }
    let mut details = json!({"t_count": tg.len(), "t_min": tg.t_min, "t_max": tg.t_max, "trials": trials});
    if identity {
        rep.check(Check::at_most(
            "max |maximal - |f g|| / max |f g|",
            worst_identity,
            cfg.tolerances.identity.unwrap_or(1e-8),
        ));
    }
    if let Some(bound) = cfg.tolerances.max_ratio {
        rep.check(Check::at_most("max L1 ratio", worst_ratio, bound));
    }
    if cfg.majorize {
        let mean = constants.iter().sum::<f64>() / constants.len() as f64;
        let hi = constants.iter().cloned().fold(f64::MIN, f64::max);
        let lo = constants.iter().cloned().fold(f64::MAX, f64::min);
        let spread = (hi / mean - 1.0).max(1.0 - lo / mean);
        details["c_emp"] = json!({"mean": mean, "min": lo, "max": hi});
        rep.check(Check::at_most("relative spread of C_emp", spread, cfg.tolerances.stability.unwrap_or(0.2)));
    }
    rep.details = details;
    Ok(())
}

fn gfunction(cfg: &ExperimentConfig, seed: u64, rep: &mut ExperimentReport) -> Res<()> {
    let (spec, base) = symbol(cfg)?;
    let g = grid(cfg.grid, spec.n())?;
    let m: SymbolRef = match &cfg.pieces {
        Some(_) => Arc::new(pieces(cfg, &base)?.remove(0)),
        None => base,
    };
    let inputs = inputs_for(cfg.inputs.as_ref().unwrap(), g, seed)?;
    let sg = dilations(cfg.dilation.as_ref(), m.support(), inputs.band(), true)?;
    let (s_lo, s_hi) = (sg.t_min, sg.t_max);
    let t = (s_lo * s_hi).sqrt();
    let probes = cfg.probe_points.unwrap_or(10);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let mut worst_ftc = 0.0f64;
    let mut worst_square = f64::NEG_INFINITY;
    let mut boundary = 0.0f64;
    let mut pairs = Vec::new();
    rep.csv.push_str("pair,x,sup_sq,two_g_gtilde\n");
    for i in 0..inputs.count() {
        let (f, gg) = inputs.pair(i)?;
        let bi = BilinearInputs::new(&f, &gg)?;
        let delta = bi.apply(m.as_ref(), t)?.sub(&bi.apply(m.as_ref(), s_lo)?)?;
        let ftc = bi.ftc_integral(m.as_ref(), s_lo, t, sg.len())?;
        let scale = delta.max_abs();
        let mut pair_ftc = 0.0f64;
        for _ in 0..probes {
            let x = rng.gen_range(0..g.len());
            let e = (delta.values()[x] - ftc.values()[x]).norm() / scale;
            pair_ftc = pair_ftc.max(e);
        }
        let sq = square_functions(&bi, m.as_ref(), &sg)?;
        rep.warn(sq.warnings.iter().cloned());
        boundary = boundary.max(sq.boundary_fraction);
        let rhs: Vec<f64> = sq.g.values().iter().zip(sq.g_tilde.values()).map(|(a, b)| 2.0 * a.re * b.re).collect();
        let peak = rhs.iter().cloned().fold(0.0, f64::max);
        let mut pair_sq = f64::NEG_INFINITY;
        for (x, r) in rhs.iter().enumerate() {
            let lhs = sq.sup.values()[x].re.powi(2);
            rep.csv.push_str(&format!("{i},{x},{lhs:e},{r:e}\n"));
            pair_sq = pair_sq.max((lhs - r) / peak);
        }
        worst_ftc = worst_ftc.max(pair_ftc);
        worst_square = worst_square.max(pair_sq);
        pairs.push(json!({"ftc_relative_error": pair_ftc, "square_excess": pair_sq}));
        if i == 0 {
            rep.fields.push(("g".into(), sq.g));
            rep.fields.push(("g_tilde".into(), sq.g_tilde));
        }
    }
    rep.details = json!({
        "s_min": s_lo, "s_max": s_hi, "cells": sg.len(), "t": t,
        "boundary_fraction": boundary, "pairs": pairs,
    });
    rep.check(Check::below("FTC relative error at probe points", worst_ftc, cfg.tolerances.ftc.unwrap_or(0.01)));
    rep.check(Check::at_most(
        "max (sup|B|^2 - 2 G G~) / max 2 G G~",
        worst_square,
        cfg.tolerances.square.unwrap_or(0.02),
    ));
    Ok(())
}

fn kernel_decay(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Res<()> {
    let (spec, m) = symbol(cfg)?;
    let n = spec.n();
    let lambda = lambda_of(spec, "kernel decay")?;
    let fg = grid(cfg.grid, 2 * n)?;
    let w = cfg.window.unwrap();
    let k = kernel(m.as_ref(), &fg)?;
    let predicted = -(n as f64 + lambda + 0.5);
    let fit = kernel_decay_fit(&k, w.r_min, w.r_max, w.bins, predicted, cfg.tolerances.slope.unwrap_or(0.4))?;
    rep.csv.push_str("log2_radius,log2_envelope\n");
    for (x, y) in &fit.samples {
        rep.csv.push_str(&format!("{x:e},{y:e}\n"));
    }
    rep.details = json!({"imag_max": k.max_imag(), "peak": k.max_abs()});
    rep.fit("kernel far-field slope", fit);
    rep.fields.push(("kernel".into(), k));
    Ok(())
}

fn convergence(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Res<()> {
    let (spec, _) = symbol(cfg)?;
    let n = spec.n();
    let lambda = lambda_of(spec, "convergence")?;
    let mut ts = cfg.dilation.as_ref().unwrap().values.clone().unwrap();
    ts.sort_by(|a, b| b.total_cmp(a));
    ts.dedup();
    let run_on = |g: Grid| -> Res<_> {
        match inputs_for(cfg.inputs.as_ref().unwrap(), g, 0)? {
            Inputs::Fixed(f, gg) => Ok(convergence_study(lambda, n, &f, &gg, &ts)?),
            Inputs::Random(_) => unreachable!("validated"),
        }
    };
    let g = grid(cfg.grid, n)?;
    let table = run_on(g)?;
    let oracle = cfg.oracle_points.map(|p| run_on(Grid::new(n, p, g.extent())?)).transpose()?;
    rep.csv.push_str("t,sup_error,oracle_sup_error\n");
    for (i, row) in table.rows.iter().enumerate() {
        let o = oracle.as_ref().map_or(String::new(), |o| format!("{:e}", o.rows[i].sup_error));
        rep.csv.push_str(&format!("{:e},{:e},{o}\n", row.t, row.sup_error));
    }
    let slack = cfg.tolerances.monotone_slack.unwrap_or(0.05);
    let worst_growth =
        table.rows.windows(2).map(|w| w[1].sup_error / w[0].sup_error - 1.0).fold(f64::NEG_INFINITY, f64::max);
    rep.check(Check::at_most("largest relative error growth as t halves", worst_growth, slack));
    if let Some(o) = &oracle {
        let factor = cfg.tolerances.oracle_factor.unwrap_or(2.0);
        rep.check(Check::below("sup error at smallest t", table.last_error(), factor * o.last_error()));
    }
    rep.details = json!({"table": table, "oracle": oracle});
    Ok(())
}

fn bessel(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Res<()> {
    let r = cfg.radii.as_ref().unwrap();
    let radii: Vec<f64> = if r.count == 1 {
        vec![r.min]
    } else {
        (0..r.count).map(|i| r.min + (r.max - r.min) * i as f64 / (r.count - 1) as f64).collect()
    };
    let main = bessel_identity_check(&radii, r.order_shift)?;
    let m = BesselSymbol { n: 1, alpha: 0.0, order_shift: r.order_shift };
    rep.csv.push_str("radius,scaled_profile,circle_transform\n");
    for &x in &radii {
        rep.csv.push_str(&format!(
            "{x:e},{:e},{:e}\n",
            main.constant * m.profile(x),
            circle_transform(x, CIRCLE_NODES)
        ));
    }
    rep.check(Check::below(
        "max deviation after normalisation",
        main.max_deviation,
        cfg.tolerances.deviation.unwrap_or(1e-8),
    ));
    let control = r.control_shift.map(|s| bessel_identity_check(&radii, s)).transpose()?;
    if let Some(c) = &control {
        rep.check(Check::above("negative control deviation", c.max_deviation, cfg.tolerances.control.unwrap_or(1e-3)));
    }
    rep.details = json!({
        "constant": main.constant, "max_deviation": main.max_deviation, "worst_radius": main.worst_radius,
        "control": control.map(|c| json!({"order_shift": c.order_shift, "max_deviation": c.max_deviation})),
    });
    Ok(())
}

fn norm_ratio(cfg: &ExperimentConfig, seed: u64, rep: &mut ExperimentReport) -> Res<()> {
    let (spec, base) = symbol(cfg)?;
    let g = grid(cfg.grid, spec.n())?;
    let ens = match inputs_for(cfg.inputs.as_ref().unwrap(), g, seed)? {
        Inputs::Random(e) => e,
        Inputs::Fixed(..) => unreachable!("validated"),
    };
    let band = joint_band(ens.band_f, ens.band_g);
    let ops: Vec<(Option<u32>, SymbolRef)> = match &cfg.pieces {
        Some(_) => pieces(cfg, &base)?.into_iter().map(|p| (Some(p.j), Arc::new(p) as SymbolRef)).collect(),
        None => vec![(None, base.clone())],
    };
    let epsilon = cfg.tolerances.epsilon.unwrap_or(0.1);
    let lambda = spec.lambda();
    rep.csv.push_str("j,max,mean,median,q25,q75,comparison_curve\n");
    let mut rows = Vec::new();
    let (mut xs, mut maxes) = (Vec::new(), Vec::new());
    for (j, m) in &ops {
        let tg = dilations(cfg.dilation.as_ref(), m.support(), Some(band), false)?;
        rep.warn(tg.aliasing_warnings(m.support(), &g));
        let stats = norm_ratio_estimate(
            |f, gg| Ok(maximal_with(&BilinearInputs::new(f, gg)?, m.as_ref(), &tg, false)?.maximal),
            &ens,
        )?;
        let curve = match (j, lambda) {
            (Some(j), Some(l)) => Some(summed_bound(*j, l, epsilon)),
            _ => None,
        };
        rep.csv.push_str(&format!(
            "{},{:e},{:e},{:e},{:e},{:e},{}\n",
            j.map_or(String::new(), |j| j.to_string()),
            stats.max,
            stats.mean,
            stats.median,
            stats.q25,
            stats.q75,
            curve.map_or(String::new(), |c| format!("{c:e}"))
        ));
        if let Some(j) = j {
            xs.push(*j as f64);
            maxes.push(stats.max);
        }
        rows.push(json!({"j": j, "t_count": tg.len(), "stats": stats, "comparison_curve": curve}));
    }
    if let Some(bound) = cfg.tolerances.max_ratio {
        let worst = rows.iter().filter_map(|r| r["stats"]["max"].as_f64()).fold(0.0, f64::max);
        rep.check(Check::at_most("max L1 ratio", worst, bound));
    }
    if cfg.pieces.is_some() {
        let lambda = lambda_of(spec, "piece-ratio slopes")?;
        let fit = DecayFitReport::fit(
            "j",
            &xs,
            &maxes,
            -(lambda - 1.0) / 2.0,
            cfg.tolerances.slope.unwrap_or(0.5),
            Comparison::AtMost,
        )?;
        rep.check(Check::below("max-ratio j-slope sign", fit.slope, 0.0));
        rep.fit("max-ratio j-slope", fit);
    }
    rep.details = json!({"epsilon": epsilon, "rows": rows});
    Ok(())
}
