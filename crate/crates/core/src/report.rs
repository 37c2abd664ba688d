//! Structured verification outcomes, serialized as JSON.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// An exact symbolic identity was established.
    Certified,
    /// An exhaustive, sampled or numeric check succeeded.
    Pass,
    Fail,
}

impl Status {
    pub fn is_success(self) -> bool {
        !matches!(self, Status::Fail)
    }
}

/// One offending (or, for dumps, one listed) matrix entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub row: Vec<u8>,
    pub col: Vec<u8>,
    pub poly: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    pub interpretation: Option<String>,
    pub seed: Option<u64>,
    pub points: Option<usize>,
    pub witnesses: Vec<Witness>,
    pub max_degree_per_var: BTreeMap<String, u32>,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invocation: Option<Vec<String>>,
}

impl Report {
    pub fn new(check: impl Into<String>, status: Status) -> Self {
        Report {
            check: check.into(),
            status,
            interpretation: None,
            seed: None,
            points: None,
            witnesses: Vec::new(),
            max_degree_per_var: BTreeMap::new(),
            elapsed_ms: 0,
            details: None,
            invocation: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status.is_success()
    }

    pub fn finish(mut self, started: Instant) -> Self {
        self.elapsed_ms = started.elapsed().as_millis() as u64;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Witnesses kept per report; the rest are only counted.
pub const MAX_WITNESSES: usize = 16;
