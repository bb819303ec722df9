//! Machine-readable verification reports.
//!
//! The canonical serialization has sorted keys, no whitespace and no wall
//! time, so two runs of the same check produce identical bytes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Passed,
    Failed,
    NotStabilized,
    /// Every comparison agreed, but at least one was probabilistic.
    Preview,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Passed => "PASSED",
            Status::Failed => "FAILED",
            Status::NotStabilized => "NOT_STABILIZED",
            Status::Preview => "PREVIEW",
        })
    }
}

/// One coefficient where a check disagreed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub index: String,
    pub expected: String,
    pub actual: String,
}

impl Witness {
    pub fn new(
        index: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
    ) -> Self {
        Witness {
            index: index.into(),
            expected: expected.into(),
            actual: actual.into(),
        }
    }

    /// A witness for a check that stopped with an error.
    pub fn from_error(context: &str, e: &Error) -> Self {
        Witness::new(context, "identity holds", e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub parameters: BTreeMap<String, Value>,
    pub status: Status,
    /// Number of instances or coefficients compared.
    pub cases: usize,
    pub witnesses: Vec<Witness>,
    /// Check-specific output such as a stabilized series.
    pub details: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

/// Witness lists are capped at this length.
pub const MAX_WITNESSES: usize = 20;

impl VerificationReport {
    pub fn new(check: impl Into<String>) -> Self {
        VerificationReport {
            check: check.into(),
            parameters: BTreeMap::new(),
            status: Status::Passed,
            cases: 0,
            witnesses: Vec::new(),
            details: BTreeMap::new(),
            wall_time_ms: None,
        }
    }

    pub fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), v.into());
        self
    }

    pub fn detail(&mut self, key: &str, v: impl Into<Value>) {
        self.details.insert(key.to_string(), v.into());
    }

    /// Record a disagreement; the report becomes FAILED.
    pub fn witness(&mut self, w: Witness) {
        self.status = Status::Failed;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }

    /// Record an error: `NotStabilized` maps to its own status, everything
    /// else to FAILED. Both carry a witness.
    pub fn error(&mut self, context: &str, e: &Error) {
        let failed_before = self.status == Status::Failed;
        self.witness(Witness::from_error(context, e));
        if matches!(e, Error::NotStabilized(_)) && !failed_before {
            self.status = Status::NotStabilized;
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Passed
    }

    /// Downgrade a clean result to PREVIEW.
    pub fn mark_preview(&mut self) {
        if self.status == Status::Passed {
            self.status = Status::Preview;
        }
    }

    /// Sorted keys, compact, wall time omitted.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        if let Value::Object(m) = &mut v {
            m.remove("wall_time_ms");
        }
        serde_json::to_string(&v).expect("values serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One line: `STATUS check(params) cases=k`.
    pub fn summary_line(&self) -> String {
        let params: Vec<String> = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={}", compact(v)))
            .collect();
        let mut s = format!(
            "{} {}({}) cases={}",
            self.status,
            self.check,
            params.join(", "),
            self.cases
        );
        if let Some(w) = self.witnesses.first() {
            s.push_str(&format!(
                " first witness at {}: expected {}, got {}",
                w.index, w.expected, w.actual
            ));
        }
        s
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Aggregate of several reports under one name.
pub fn combine(check: &str, parts: Vec<VerificationReport>) -> VerificationReport {
    let mut out = VerificationReport::new(check);
    out.cases = parts.iter().map(|p| p.cases).sum();
    let mut status = Status::Passed;
    for p in &parts {
        status = match (status, p.status) {
            (Status::Failed, _) | (_, Status::Failed) => Status::Failed,
            (Status::NotStabilized, _) | (_, Status::NotStabilized) => Status::NotStabilized,
            (Status::Preview, _) | (_, Status::Preview) => Status::Preview,
            _ => Status::Passed,
        };
        for w in &p.witnesses {
            if out.witnesses.len() < MAX_WITNESSES {
                out.witnesses.push(Witness::new(
                    format!("{}: {}", p.check, w.index),
                    w.expected.clone(),
                    w.actual.clone(),
                ));
            }
        }
    }
    out.status = status;
    out.details.insert(
        "parts".into(),
        Value::Array(
            parts
                .iter()
                .map(|p| serde_json::from_str(&p.canonical_json()).expect("round trip"))
                .collect(),
        ),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_ignores_time() {
        let mut a = VerificationReport::new("x").param("n", 2).param("a", "b");
        a.cases = 3;
        let mut b = a.clone();
        a.wall_time_ms = Some(5);
        b.wall_time_ms = Some(900);
        assert_eq!(a.canonical_json(), b.canonical_json());
        assert!(a
            .canonical_json()
            .starts_with(r#"{"cases":3,"check":"x","details":{},"parameters":{"a":"b","n":2}"#));
    }

    #[test]
    fn failures_carry_witnesses() {
        let mut r = VerificationReport::new("x");
        r.error("step", &Error::NotStabilized("J".into()));
        assert_eq!(r.status, Status::NotStabilized);
        assert_eq!(r.witnesses.len(), 1);
        r.witness(Witness::new("m(1)", "1", "2"));
        assert_eq!(r.status, Status::Failed);
        let c = combine("all", vec![r, VerificationReport::new("y")]);
        assert_eq!(c.status, Status::Failed);
        assert_eq!(c.witnesses.len(), 2);
    }
}
