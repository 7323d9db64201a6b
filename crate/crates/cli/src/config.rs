use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use bimax::zoo::PieceFlavor;

use crate::CliError;

/// A run: one or more experiments sharing a seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    pub experiments: Vec<ExperimentConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Decompose,
    WaveletDecay,
    Maximal,
    Gfunction,
    KernelDecay,
    Convergence,
    BesselCheck,
    NormRatio,
}

impl Kind {
    pub fn label(&self) -> &'static str {
        match self {
            Kind::Decompose => "decompose",
            Kind::WaveletDecay => "wavelet-decay",
            Kind::Maximal => "maximal",
            Kind::Gfunction => "gfunction",
            Kind::KernelDecay => "kernel-decay",
            Kind::Convergence => "convergence",
            Kind::BesselCheck => "bessel-check",
            Kind::NormRatio => "norm-ratio",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub kind: Kind,
    #[serde(default)]
    pub symbol: Option<SymbolSpec>,
    #[serde(default)]
    pub pieces: Option<PieceSpec>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub wavelet: Option<WaveletSpec>,
    #[serde(default)]
    pub dilation: Option<DilationSpec>,
    #[serde(default)]
    pub inputs: Option<InputSpec>,
    #[serde(default)]
    pub norm: Option<NormSpec>,
    #[serde(default)]
    pub decay: Option<DecaySpec>,
    #[serde(default)]
    pub window: Option<WindowSpec>,
    #[serde(default)]
    pub radii: Option<RadiiSpec>,
    #[serde(default)]
    pub oracle_points: Option<usize>,
    #[serde(default)]
    pub probe_points: Option<usize>,
    #[serde(default)]
    pub majorize: bool,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub dump_fields: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SymbolSpec {
    Identity { n: usize },
    BochnerRiesz { n: usize, lambda: f64 },
    MAlpha { n: usize, alpha: f64 },
    Gaussian { n: usize, width: f64 },
    Bump { n: usize, radius: f64 },
}

impl SymbolSpec {
    pub fn n(&self) -> usize {
        match *self {
            SymbolSpec::Identity { n }
            | SymbolSpec::BochnerRiesz { n, .. }
            | SymbolSpec::MAlpha { n, .. }
            | SymbolSpec::Gaussian { n, .. }
            | SymbolSpec::Bump { n, .. } => n,
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match *self {
            SymbolSpec::BochnerRiesz { lambda, .. } => Some(lambda),
            _ => None,
        }
    }
}

/// Annular pieces `j_min..=j_max` of the symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub flavor: PieceFlavor,
    pub j_min: u32,
    pub j_max: u32,
}

impl PieceSpec {
    pub fn js(&self) -> std::ops::RangeInclusive<u32> {
        self.j_min..=self.j_max
    }
}

/// `points` per axis on `[-extent/2, extent/2)`; the dimension comes from
/// the experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub points: usize,
    pub extent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveletSpec {
    pub order: usize,
    pub gamma_max: u32,
    #[serde(default = "default_resolution")]
    pub resolution: u32,
    #[serde(default = "default_quad_level")]
    pub quad_level: u32,
    /// Spatial grid for reconstruction, if any.
    #[serde(default)]
    pub reconstruct: Option<GridSpec>,
}

fn default_resolution() -> u32 {
    12
}

fn default_quad_level() -> u32 {
    2
}

/// Either an explicit list or a log range. Missing ends default to the
/// range where the symbol meets the input band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DilationSpec {
    #[serde(default)]
    pub t_min: Option<f64>,
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default)]
    pub per_octave: Option<usize>,
    /// Cell count for midpoint rules in `log s`.
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InputSpec {
    /// Unit-`L²` complex Gaussian spectra on radial bands.
    Random { count: usize, band_f: (f64, f64), band_g: (f64, f64) },
    /// `e^{-π|x-c|²/w²} e^{2πi k x₁}`, with `c` on the first axis.
    Gaussian { f: GaussianSpec, g: GaussianSpec },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianSpec {
    #[serde(default)]
    pub center: f64,
    pub width: f64,
    #[serde(default)]
    pub frequency: f64,
}

/// `L^p_s` norm selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpec {
    pub p: f64,
    #[serde(default)]
    pub smoothness_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecaySpec {
    pub r: f64,
    pub smoothness_s: f64,
    #[serde(default)]
    pub gamma_cap: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub r_min: f64,
    pub r_max: f64,
    #[serde(default = "default_bins")]
    pub bins: usize,
}

fn default_bins() -> usize {
    12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiiSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub order_shift: f64,
    #[serde(default)]
    pub control_shift: Option<f64>,
}

/// Thresholds; each kind reads the ones it needs and falls back to its own
/// defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub slope: Option<f64>,
    pub gamma_slope: Option<f64>,
    pub identity: Option<f64>,
    pub reconstruction: Option<f64>,
    pub oracle: Option<f64>,
    pub ftc: Option<f64>,
    pub square: Option<f64>,
    pub stability: Option<f64>,
    pub deviation: Option<f64>,
    pub control: Option<f64>,
    pub oracle_factor: Option<f64>,
    pub monotone_slack: Option<f64>,
    pub max_ratio: Option<f64>,
    pub epsilon: Option<f64>,
}

/// Set `path` (dot separated, numeric parts index arrays) to `value`.
/// The value is parsed as JSON when possible and kept as a string
/// otherwise.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override `{assignment}` is not key=value")))?;
    if path.is_empty() {
        return Err(CliError::Config("override with an empty key".into()));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut cur = doc;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        cur = match cur {
            Value::Object(map) => {
                if last {
                    map.insert(part.to_string(), value);
                    return Ok(());
                }
                map.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()))
            }
            Value::Array(items) => {
                let idx: usize =
                    part.parse().map_err(|_| CliError::Config(format!("`{part}` in `{path}` must index an array")))?;
                let len = items.len();
                let slot = items
                    .get_mut(idx)
                    .ok_or_else(|| CliError::Config(format!("index {idx} in `{path}` out of range ({len})")))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(CliError::Config(format!("`{path}` walks into a scalar"))),
        };
    }
    unreachable!("loop returns on the last part")
}

pub fn parse_suite(doc: Value) -> Result<SuiteConfig, CliError> {
    serde_json::from_value(doc).map_err(|e| CliError::Config(e.to_string()))
}
