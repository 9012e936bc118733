use std::time::Instant;

use overlapdim_core::rng::RNG_ALGORITHM;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema_version: &'static str,
    pub command: &'static str,
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub tolerances: Map<String, Value>,
    pub rng: &'static str,
    pub duration_ms: f64,
}

/// Assembles a command's JSON document: result fields at the top level, plus
/// `command` and `metadata`.
pub struct Report {
    command: &'static str,
    seed: Option<u64>,
    tolerances: Map<String, Value>,
    started: Instant,
}

impl Report {
    pub fn start(command: &'static str) -> Self {
        Self {
            command,
            seed: None,
            tolerances: Map::new(),
            started: Instant::now(),
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn tolerance(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.tolerances.insert(name.to_string(), value.into());
        self
    }

    pub fn finish(self, result: impl Serialize) -> Result<Value, CliError> {
        let mut doc = match serde_json::to_value(result)? {
            Value::Object(map) => map,
            other => {
                let mut map = Map::new();
                map.insert("result".into(), other);
                map
            }
        };
        let meta = RunMetadata {
            tool: "overlapdim",
            version: env!("CARGO_PKG_VERSION"),
            schema_version: SCHEMA_VERSION,
            command: self.command,
            args: std::env::args().skip(1).collect(),
            seed: self.seed,
            tolerances: self.tolerances,
            rng: RNG_ALGORITHM,
            duration_ms: self.started.elapsed().as_secs_f64() * 1e3,
        };
        doc.insert("command".into(), Value::from(self.command));
        doc.insert("metadata".into(), serde_json::to_value(meta)?);
        Ok(Value::Object(doc))
    }
}
