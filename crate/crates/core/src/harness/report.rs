//! Report records shared by every command. A report passes iff each of its
//! checks passes.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

/// How `measured` is compared with `tolerance`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub measured: f64,
    pub tolerance: f64,
    pub relation: Relation,
    /// Short description of the identity or property being checked.
    pub anchor: String,
}

impl CheckRecord {
    pub fn new(name: &str, measured: f64, tolerance: f64, relation: Relation, anchor: &str) -> Self {
        // NaN never passes
        let ok = match relation {
            Relation::AtMost => measured <= tolerance,
            Relation::AtLeast => measured >= tolerance,
        };
        CheckRecord {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured,
            tolerance,
            relation,
            anchor: anchor.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Ordered check list with a name prefix.
#[derive(Clone, Debug, Default)]
pub struct Checks {
    prefix: String,
    pub records: Vec<CheckRecord>,
}

impl Checks {
    pub fn new(prefix: &str) -> Self {
        Checks { prefix: prefix.into(), records: Vec::new() }
    }

    fn push(&mut self, name: &str, measured: f64, tolerance: f64, relation: Relation, anchor: &str) {
        let full = if self.prefix.is_empty() { name.to_string() } else { format!("{}.{name}", self.prefix) };
        self.records.push(CheckRecord::new(&full, measured, tolerance, relation, anchor));
    }

    pub fn at_most(&mut self, name: &str, measured: f64, tolerance: f64, anchor: &str) {
        self.push(name, measured, tolerance, Relation::AtMost, anchor);
    }

    pub fn at_least(&mut self, name: &str, measured: f64, tolerance: f64, anchor: &str) {
        self.push(name, measured, tolerance, Relation::AtLeast, anchor);
    }

    /// Boolean check, recorded as measured 1/0 against 1.
    pub fn holds(&mut self, name: &str, ok: bool, anchor: &str) {
        self.push(name, f64::from(u8::from(ok)), 1.0, Relation::AtLeast, anchor);
    }

    pub fn into_records(self) -> Vec<CheckRecord> {
        self.records
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    /// Seconds since the Unix epoch; the only field allowed to differ between identical runs.
    pub timestamp: u64,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub data: Value,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(command: &str, suite: Option<String>, seed: u64, checks: Vec<CheckRecord>, data: Value) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let pass = checks.iter().all(CheckRecord::passed);
        SuiteReport { schema: SCHEMA, timestamp, command: command.into(), suite, seed, checks, data, pass }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed())
    }
}
