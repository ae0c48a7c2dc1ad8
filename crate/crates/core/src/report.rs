//! Versioned JSON report shared by the verification suites and the CLI.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "dirac-lab/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One named check with the formula it exercises.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub max_residual: Option<f64>,
    pub details: Value,
}

impl Record {
    pub fn new(
        name: &str,
        anchor: &str,
        status: Status,
        max_residual: Option<f64>,
        details: Value,
    ) -> Self {
        Record {
            name: name.to_string(),
            anchor: anchor.to_string(),
            status,
            max_residual,
            details,
        }
    }

    /// Passes when `residual ≤ tol` (and the residual is finite).
    pub fn residual(name: &str, anchor: &str, residual: f64, tol: f64, details: Value) -> Self {
        let status = if residual <= tol {
            Status::Pass
        } else {
            Status::Fail
        };
        Record::new(name, anchor, status, Some(residual), details)
    }

    /// Exact check: passes when no counterexample was found.
    pub fn exact(name: &str, anchor: &str, ok: bool, details: Value) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Record::new(name, anchor, status, None, details)
    }

    pub fn skipped(name: &str, anchor: &str, reason: &str) -> Self {
        Record::new(
            name,
            anchor,
            Status::Skipped,
            None,
            serde_json::json!({ "reason": reason }),
        )
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub command: String,
    pub config: Value,
    pub records: Vec<Record>,
    pub status: Status,
}

impl Report {
    /// Sorts records by name; the overall status is `fail` if any record failed.
    pub fn new(command: &str, config: Value, mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| a.name.cmp(&b.name));
        let status = if records.iter().all(Record::passed) {
            Status::Pass
        } else {
            Status::Fail
        };
        Report {
            schema: SCHEMA.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            config,
            records,
            status,
        }
    }

    pub fn record(&self, name: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}
