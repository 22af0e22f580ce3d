//! Experiment reports: a canonical, sorted-key JSON section plus timing.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use anyhow::Result;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub experiment: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub verdicts: Vec<Verdict>,
    pub status: Status,
    pub notes: Vec<String>,
    pub duration: Duration,
}

impl ExperimentReport {
    pub fn new(experiment: &str) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            inputs: Map::new(),
            outputs: Map::new(),
            verdicts: Vec::new(),
            status: Status::Ok,
            notes: Vec::new(),
            duration: Duration::ZERO,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn output(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.outputs.insert(key.to_string(), value.into());
        self
    }

    pub fn verdict(&mut self, name: &str, pass: bool, detail: impl Into<String>) -> &mut Self {
        self.verdicts.push(Verdict { name: name.to_string(), pass, detail: detail.into() });
        self
    }

    pub fn inconclusive(&mut self, note: impl Into<String>) -> &mut Self {
        self.status = Status::Inconclusive;
        self.notes.push(note.into());
        self
    }

    pub fn verdict_named(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    /// All verdicts pass and nothing was left inconclusive.
    pub fn success(&self) -> bool {
        self.status == Status::Ok && self.verdicts.iter().all(|v| v.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.success() { 0 } else { 1 }
    }

    /// The deterministic part of the report, keys sorted at every level.
    pub fn canonical(&self) -> Value {
        let verdicts: Map<String, Value> = self
            .verdicts
            .iter()
            .map(|v| (v.name.clone(), json!({ "pass": v.pass, "detail": v.detail })))
            .collect();
        sorted(json!({
            "experiment": self.experiment,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "verdicts": verdicts,
            "status": match self.status {
                Status::Ok => "ok",
                Status::Inconclusive => "inconclusive",
            },
            "notes": self.notes,
        }))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "canonical": self.canonical(),
            "duration_ms": self.duration.as_secs_f64() * 1e3,
        })
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(&self.to_json())?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} ({:.1} ms)", self.experiment, self.duration.as_secs_f64() * 1e3);
        for (k, v) in &self.outputs {
            let text = v.to_string();
            if text.len() <= 120 {
                let _ = writeln!(s, "  {k}: {text}");
            } else {
                let _ = writeln!(s, "  {k}: <{} chars, see JSON>", text.len());
            }
        }
        for v in &self.verdicts {
            let _ = writeln!(s, "  [{}] {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        if self.status == Status::Inconclusive {
            let _ = writeln!(s, "  status: INCONCLUSIVE");
        }
        s
    }
}

fn sorted(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().map(|(k, v)| (k, sorted(v))).collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().collect())
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(sorted).collect()),
        other => other,
    }
}
