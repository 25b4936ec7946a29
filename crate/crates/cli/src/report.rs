//! Canonical JSON reports.

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

use crate::config::ExperimentConfig;

pub const VERSION: &str = concat!("topocyl ", env!("CARGO_PKG_VERSION"));

/// What a command hands back: its verdict, its result, and the parameters
/// it actually used.
pub struct Outcome {
    pub verdict: String,
    pub result: Value,
    pub params: Value,
}

impl Outcome {
    pub fn new(verdict: impl Into<String>, result: Value, params: Value) -> Self {
        Self {
            verdict: verdict.into(),
            result,
            params,
        }
    }
}

/// Rebuilds every object with keys in sorted order.
pub fn canonical(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = Map::new();
            for (k, v) in entries {
                out.insert(k, canonical(v));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonical).collect()),
        other => other,
    }
}

pub fn document(command: &str, cfg: &ExperimentConfig, outcome: &Outcome) -> Result<Value> {
    let mut config = serde_json::to_value(cfg)?;
    if let (Value::Object(c), Value::Object(p)) = (&mut config, &outcome.params) {
        for (k, v) in p {
            c.insert(k.clone(), v.clone());
        }
    }
    let matches = cfg.expect.as_ref().map(|e| *e == outcome.verdict);
    Ok(canonical(json!({
        "command": command,
        "version": VERSION,
        "config": config,
        "verdict": outcome.verdict,
        "matches_expectation": matches,
        "result": outcome.result,
    })))
}

pub fn write(doc: &Value, cfg: &ExperimentConfig) -> Result<()> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}
