//! Scenario registry and report rendering for the `ncalc` batch driver.

mod scenarios;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ncalc::{Algebra, Report, SeriesParams};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

pub use scenarios::registry;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("scenario `{scenario}` does not take option `{option}`")]
    UnsupportedOption { scenario: String, option: String },
    #[error(transparent)]
    Core(#[from] ncalc::Error),
}

/// Options shared by every scenario; scenario-specific ones are optional.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub series: SeriesParams,
    pub seed: u64,
    pub probes: usize,
    pub algebra: Option<String>,
    pub c: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            series: SeriesParams::default(),
            seed: 0,
            probes: ncalc::diffeq::DEFAULT_PROBES,
            algebra: None,
            c: None,
        }
    }
}

impl Options {
    pub(crate) fn algebra_or(&self, default: &str) -> Result<Algebra, CliError> {
        Ok(Algebra::from_tag(
            self.algebra.as_deref().unwrap_or(default),
        )?)
    }
}

pub struct Scenario {
    pub name: &'static str,
    pub description: &'static str,
    pub anchor: &'static str,
    /// Options beyond the shared ones that this scenario reads.
    pub options: &'static [&'static str],
    /// Verdict the scenario is known to produce with default options.
    pub expected: bool,
    pub run: fn(&Options) -> Result<Report, CliError>,
}

/// Machine-readable result of one scenario run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Payload {
    pub scenario: String,
    pub anchor: String,
    pub verdict: bool,
    pub residual: f64,
    pub metrics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub seed: u64,
}

pub fn find(name: &str) -> Option<&'static Scenario> {
    registry().iter().find(|s| s.name == name)
}

pub fn run_scenario(name: &str, options: &Options) -> Result<Payload, CliError> {
    let scenario = find(name).ok_or_else(|| CliError::UnknownScenario(name.to_string()))?;
    let used = [
        ("algebra", options.algebra.is_some()),
        ("c", options.c.is_some()),
    ];
    for (opt, set) in used {
        if set && !scenario.options.contains(&opt) {
            return Err(CliError::UnsupportedOption {
                scenario: name.to_string(),
                option: opt.to_string(),
            });
        }
    }
    let report = (scenario.run)(options)?;
    Ok(Payload {
        scenario: scenario.name.to_string(),
        anchor: scenario.anchor.to_string(),
        verdict: report.verdict,
        residual: report.residual,
        metrics: report.metrics,
        witness: report.witness,
        notes: report.notes,
        seed: options.seed,
    })
}

pub fn list_scenarios() -> String {
    let width = registry().iter().map(|s| s.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for s in registry() {
        let _ = writeln!(out, "{:<width$}  {}  [{}]", s.name, s.description, s.anchor);
    }
    out
}

pub fn render_text(p: &Payload) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", p.scenario);
    let _ = writeln!(out, "anchor:   {}", p.anchor);
    let _ = writeln!(out, "verdict:  {}", p.verdict);
    let _ = writeln!(out, "residual: {:e}", p.residual);
    let _ = writeln!(out, "seed:     {}", p.seed);
    if !p.metrics.is_empty() {
        let _ = writeln!(out, "metrics:");
        for (k, v) in &p.metrics {
            let _ = writeln!(out, "  {k}: {v:e}");
        }
    }
    if let Some(w) = &p.witness {
        let _ = writeln!(out, "witness:  {w}");
    }
    for n in &p.notes {
        let _ = writeln!(out, "note:     {n}");
    }
    out
}

pub fn render_json(p: &Payload) -> String {
    serde_json::to_string_pretty(p).expect("payload is plain data")
}
