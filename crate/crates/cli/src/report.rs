use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use adic_core::verdict::{Outcome, Verdict, Witness};

pub const SCHEMA_ID: &str = "adic-report/1";

/// The published JSON schema every report validates against.
pub const SCHEMA: &str = include_str!("../schema/adic-report.schema.json");

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct Bounds {
    pub kmax: u32,
    pub depth: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WitnessJson {
    pub kind: String,
    pub level: Option<u32>,
    pub index: Option<i64>,
    pub element: Vec<String>,
    pub note: String,
}

impl From<&Witness> for WitnessJson {
    fn from(w: &Witness) -> Self {
        WitnessJson {
            kind: w.kind.clone(),
            level: w.level,
            index: w.index,
            element: w.element.clone(),
            note: w.note.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub line: usize,
    pub inputs_digest: String,
    pub verdict: &'static str,
    pub summary: String,
    pub witnesses: Vec<WitnessJson>,
    pub bounds: Bounds,
    pub details: Value,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub timing_ms: u64,
}

/// SHA-256 over the canonical text of everything a command depends on,
/// followed by the bounds.
pub fn inputs_digest(inputs: &[String], bounds: Bounds) -> String {
    let mut h = Sha256::new();
    for s in inputs {
        h.update(s.as_bytes());
        h.update(b"\n");
    }
    h.update(format!("kmax={} depth={}", bounds.kmax, bounds.depth).as_bytes());
    hex::encode(h.finalize())
}

impl Report {
    pub fn new(command: String, line: usize, digest: String, bounds: Bounds) -> Report {
        Report {
            schema: SCHEMA_ID,
            command,
            line,
            inputs_digest: digest,
            verdict: Outcome::Pass.as_str(),
            summary: String::new(),
            witnesses: Vec::new(),
            bounds,
            details: Value::Object(Default::default()),
            notes: Vec::new(),
            error: None,
            timing_ms: 0,
        }
    }

    pub fn outcome(&self) -> Outcome {
        match self.verdict {
            "pass" => Outcome::Pass,
            "fail" => Outcome::Fail,
            _ => Outcome::Undetermined,
        }
    }

    pub fn set_verdict(&mut self, v: &Verdict) {
        self.verdict = v.outcome.as_str();
        self.witnesses.extend(v.witnesses.iter().map(WitnessJson::from));
        self.notes.extend(v.notes.iter().cloned());
        if self.summary.is_empty() {
            self.summary = format!("{}: {}", v.check, v.outcome);
        }
        self.ensure_failure_witness();
    }

    pub fn set_error(&mut self, message: String) {
        self.verdict = Outcome::Fail.as_str();
        self.summary = format!("error: {message}");
        self.witnesses.push(WitnessJson {
            kind: "error".into(),
            level: None,
            index: None,
            element: Vec::new(),
            note: message.clone(),
        });
        self.error = Some(message);
    }

    fn ensure_failure_witness(&mut self) {
        if self.verdict == "fail" && self.witnesses.is_empty() {
            self.witnesses.push(WitnessJson {
                kind: "unspecified".into(),
                level: None,
                index: None,
                element: Vec::new(),
                note: self.summary.clone(),
            });
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}
