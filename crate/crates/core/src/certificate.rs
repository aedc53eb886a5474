//! Structured verdicts with reproducible evidence.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::field::FieldSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub label: String,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub verdict: Verdict,
    pub field: FieldSpec,
    pub seed: u64,
    pub trials: u64,
    pub evidence: Vec<Evidence>,
    pub version: String,
}

impl Certificate {
    pub fn new(name: &str, field: FieldSpec, seed: u64, trials: u64) -> Self {
        Certificate {
            name: name.to_string(),
            verdict: Verdict::Inconclusive,
            field,
            seed,
            trials,
            evidence: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn push(&mut self, label: &str, value: impl Into<Value>) {
        self.evidence.push(Evidence {
            label: label.to_string(),
            value: value.into(),
        });
    }

    pub fn get(&self, label: &str) -> Option<&Value> {
        self.evidence.iter().find(|e| e.label == label).map(|e| &e.value)
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}
