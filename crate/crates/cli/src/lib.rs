//! Config-driven experiment runner behind the `bimax` binary.
//!
//! Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 invalid
//! configuration, 3 insufficient grid resolution, 4 numerical or I/O
//! failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiments;
pub mod rawfield;
pub mod report;

use std::fs;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use config::SuiteConfig;
use report::{Metadata, SuiteReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Resolution(_) => 3,
            CliError::Numeric(_) | CliError::Io(_) => 4,
        }
    }

    pub fn context(self, name: &str) -> Self {
        let wrap = |m: String| format!("experiment `{name}`: {m}");
        match self {
            CliError::Config(m) => CliError::Config(wrap(m)),
            CliError::Resolution(m) => CliError::Resolution(wrap(m)),
            CliError::Numeric(m) => CliError::Numeric(wrap(m)),
            CliError::Io(m) => CliError::Io(wrap(m)),
        }
    }
}

impl From<bimax::Error> for CliError {
    fn from(e: bimax::Error) -> Self {
        use bimax::Error as E;
        let msg = e.to_string();
        match e {
            E::Resolution(_) => CliError::Resolution(msg),
            E::Numeric(_) | E::Table(_) | E::Fit(_) => CliError::Numeric(msg),
            E::InvalidGrid(_)
            | E::InvalidParameter(_)
            | E::Domain(_)
            | E::UnsupportedOrder(_)
            | E::InvalidSplit(_)
            | E::Parse(_) => CliError::Config(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;

/// Validate every experiment before running any of them.
pub fn validate_suite(suite: &SuiteConfig) -> Result<(), CliError> {
    if suite.experiments.is_empty() {
        return Err(CliError::Config("no experiments configured".into()));
    }
    let mut names = std::collections::BTreeSet::new();
    for e in &suite.experiments {
        if !names.insert(&e.name) {
            return Err(CliError::Config(format!("duplicate experiment name `{}`", e.name)));
        }
        experiments::validate(e)?;
    }
    Ok(())
}

pub fn run_suite(suite: &SuiteConfig) -> Result<(SuiteReport, Vec<(String, f64)>), CliError> {
    validate_suite(suite)?;
    let mut reports = Vec::new();
    let mut seconds = Vec::new();
    for e in &suite.experiments {
        let start = Instant::now();
        let rep = experiments::run(e, suite.seed).map_err(|err| err.context(&e.name))?;
        seconds.push((e.name.clone(), start.elapsed().as_secs_f64()));
        reports.push(rep);
    }
    let verdict = reports.iter().all(|r| r.verdict);
    Ok((SuiteReport { suite: suite.name.clone(), seed: suite.seed, verdict, experiments: reports }, seconds))
}

fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

/// `report.json`, one CSV per experiment, optional raw dumps, and the
/// wall-clock `metadata.json`.
pub fn write_outputs(dir: &Path, report: &SuiteReport, meta: &Metadata) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let json = serde_json::to_string_pretty(report).map_err(|e| CliError::Numeric(e.to_string()))?;
    fs::write(dir.join("report.json"), json + "\n")?;
    for e in &report.experiments {
        if !e.csv.is_empty() {
            fs::write(dir.join(format!("{}.csv", e.name)), &e.csv)?;
        }
        for (label, field) in &e.fields {
            fs::write(dir.join(format!("{}.{label}.bin", e.name)), rawfield::encode(field))?;
        }
    }
    let meta = serde_json::to_string_pretty(meta).map_err(|e| CliError::Numeric(e.to_string()))?;
    fs::write(dir.join("metadata.json"), meta + "\n")?;
    Ok(())
}

/// Load, override, validate, run and write. Returns the exit code.
pub fn execute(
    config_text: &str,
    overrides: &[String],
    seed: Option<u64>,
    out: Option<&Path>,
    threads: usize,
) -> Result<(i32, SuiteReport), CliError> {
    let mut doc: serde_json::Value =
        serde_json::from_str(config_text).map_err(|e| CliError::Config(format!("not valid JSON: {e}")))?;
    for o in overrides {
        config::apply_override(&mut doc, o)?;
    }
    if let Some(s) = seed {
        config::apply_override(&mut doc, &format!("seed={s}"))?;
    }
    let suite = config::parse_suite(doc)?;
    validate_suite(&suite)?;
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| suite.output_dir.clone())
        .unwrap_or_else(|| Path::new("out").join(&suite.name));
    let started = unix_now();
    let (report, seconds) = run_suite(&suite)?;
    let meta = Metadata {
        suite: suite.name.clone(),
        started_unix: started,
        finished_unix: unix_now(),
        threads,
        version: env!("CARGO_PKG_VERSION"),
        seconds,
    };
    write_outputs(&dir, &report, &meta)?;
    let code = if report.verdict { EXIT_PASS } else { EXIT_VERDICT };
    Ok((code, report))
}
