//! Machine-readable result records.
//!
//! Every command emits one record per logical result: the command name,
//! the validated inputs, and a list of named output values, each tagged
//! with the method that produced it. Records serialize to one JSON
//! object per line. Wall-clock time is kept *out* of the serialized
//! form so that identical inputs and seeds produce byte-identical
//! records; the human-readable table reports timing instead.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Duration;

/// How a value was obtained. The vocabulary is closed so that scripts
/// can rely on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Integer enumeration or table convolution; exact.
    ExactCount,
    /// Deterministic numerical quadrature.
    Quadrature,
    /// Seeded random sampling.
    MonteCarlo,
    /// A truncated series or product with a tail model.
    TruncatedSeries,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ExactCount => "exact-count",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte-carlo",
            Method::TruncatedSeries => "truncated-series",
        }
    }
}

/// One named output value tagged with the method that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputValue {
    pub name: String,
    pub value: serde_json::Value,
    pub method: String,
}

/// One emitted result: command, inputs, outputs, and (when the
/// computation was randomized) the seed that reproduces it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub command: String,
    pub inputs: BTreeMap<String, serde_json::Value>,
    pub outputs: Vec<OutputValue>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub version: String,
    /// Wall-clock time for the human table; never serialized (records
    /// must be byte-identical across reruns).
    #[serde(skip, default)]
    pub elapsed: Duration,
}

impl ResultRecord {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
            seed: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn output(mut self, name: &str, value: impl Into<serde_json::Value>, method: Method) -> Self {
        self.outputs.push(OutputValue {
            name: name.to_string(),
            value: value.into(),
            method: method.as_str().to_string(),
        });
        self
    }

    /// Exact integer counts can exceed what a JSON number holds, so they
    /// are emitted as decimal strings.
    pub fn count_output(self, name: &str, value: u128) -> Self {
        self.output(name, value.to_string(), Method::ExactCount)
    }

    pub fn elapsed(mut self, elapsed: Duration) -> Self {
        self.elapsed = elapsed;
        self
    }

    /// Render as one JSON line.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("record serialization cannot fail")
    }
}

/// Convert an offset to its JSON form `[h1, h2, h3]`.
pub fn offset_json(h: &vinogradov::domain::Offset) -> serde_json::Value {
    serde_json::json!([h.h1, h.h2, h.h3])
}
