use serde::Serialize;
use serde_json::Value;

use bimax::harness::DecayFitReport;
use bimax::spectral::Field;

/// A scalar compared against a threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: &'static str,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, relation: "<=", threshold, pass: value <= threshold }
    }

    pub fn below(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, relation: "<", threshold, pass: value < threshold }
    }

    pub fn above(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, relation: ">", threshold, pass: value > threshold }
    }

    pub fn from_fit(name: &str, fit: &DecayFitReport) -> Self {
        let relation = match fit.comparison {
            bimax::harness::Comparison::AtMost => "slope <= predicted + tol",
            bimax::harness::Comparison::Within => "|slope - predicted| <= tol",
        };
        Self { name: name.into(), value: fit.slope, relation, threshold: fit.predicted_slope, pass: fit.verdict }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub kind: &'static str,
    pub verdict: bool,
    pub checks: Vec<Check>,
    pub fits: Vec<DecayFitReport>,
    pub details: Value,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub csv: String,
    #[serde(skip)]
    pub fields: Vec<(String, Field)>,
}

impl ExperimentReport {
    pub fn new(name: &str, kind: &'static str) -> Self {
        Self {
            name: name.into(),
            kind,
            verdict: true,
            checks: Vec::new(),
            fits: Vec::new(),
            details: Value::Null,
            warnings: Vec::new(),
            csv: String::new(),
            fields: Vec::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        self.verdict &= c.pass;
        self.checks.push(c);
    }

    pub fn fit(&mut self, name: &str, fit: DecayFitReport) {
        self.check(Check::from_fit(name, &fit));
        self.fits.push(fit);
    }

    pub fn warn(&mut self, w: impl IntoIterator<Item = String>) {
        for w in w {
            if !self.warnings.contains(&w) {
                self.warnings.push(w);
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub verdict: bool,
    pub experiments: Vec<ExperimentReport>,
}

/// Wall-clock data kept out of the report so reports stay byte-stable.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub suite: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub threads: usize,
    pub version: &'static str,
    pub seconds: Vec<(String, f64)>,
}
