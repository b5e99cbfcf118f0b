use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// Verdict record emitted by checkers and scenarios.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub verdict: bool,
    pub residual: f64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(verdict: bool, residual: f64) -> Self {
        Self {
            verdict,
            residual,
            metrics: BTreeMap::new(),
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn metric(mut self, key: &str, value: f64) -> Self {
        self.metrics.insert(key.to_string(), value);
        self
    }

    pub fn witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}
