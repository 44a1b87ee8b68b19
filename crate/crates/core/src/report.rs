//! Structured pass/fail results with witnesses, serialized as canonical JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    /// The outcome comes from a fixed case table rather than a computation.
    Lookup,
    Fail,
    Error,
}

impl Status {
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::Lookup)
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    /// Set on finite-field results: evidence in characteristic p, not a proof over C.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<CheckReport>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, status: Status) -> CheckReport {
        CheckReport {
            check: check.into(),
            status,
            witness: None,
            message: None,
            metrics: BTreeMap::new(),
            details: BTreeMap::new(),
            provenance: Provenance::default(),
            children: Vec::new(),
        }
    }

    pub fn pass(check: impl Into<String>) -> CheckReport {
        CheckReport::new(check, Status::Pass)
    }

    pub fn fail(check: impl Into<String>, message: impl Into<String>) -> CheckReport {
        CheckReport::new(check, Status::Fail).with_message(message)
    }

    pub fn error(check: impl Into<String>, message: impl Into<String>) -> CheckReport {
        CheckReport::new(check, Status::Error).with_message(message)
    }

    pub fn lookup(check: impl Into<String>) -> CheckReport {
        CheckReport::new(check, Status::Lookup)
    }

    /// Pass when `ok`, otherwise fail with `message`.
    pub fn expect(check: impl Into<String>, ok: bool, message: impl Into<String>) -> CheckReport {
        if ok {
            CheckReport::pass(check)
        } else {
            CheckReport::fail(check, message)
        }
    }

    /// Aggregate whose status is the worst child status.
    pub fn group(check: impl Into<String>, children: Vec<CheckReport>) -> CheckReport {
        let status = children.iter().map(|c| c.status).max().unwrap_or(Status::Pass);
        let mut r = CheckReport::new(check, status);
        r.children = children;
        r
    }

    pub fn passed(&self) -> bool {
        self.status.is_ok()
    }

    pub fn with_witness(mut self, w: impl Serialize) -> CheckReport {
        self.witness = Some(serde_json::to_value(w).expect("serializable witness"));
        self
    }

    pub fn with_message(mut self, m: impl Into<String>) -> CheckReport {
        self.message = Some(m.into());
        self
    }

    pub fn with_metric(mut self, key: &str, v: impl Serialize) -> CheckReport {
        self.metrics
            .insert(key.into(), serde_json::to_value(v).expect("serializable metric"));
        self
    }

    pub fn with_detail(mut self, key: &str, v: impl Serialize) -> CheckReport {
        self.details
            .insert(key.into(), serde_json::to_value(v).expect("serializable detail"));
        self
    }

    pub fn with_field(mut self, field: impl ToString) -> CheckReport {
        self.provenance.field = Some(field.to_string());
        self
    }

    pub fn with_prime(mut self, p: u64) -> CheckReport {
        self.provenance.prime = Some(p);
        self.provenance.evidence = Some(format!("finite-field evidence over F_{p}; not a proof in characteristic 0"));
        self
    }

    pub fn with_seed(mut self, seed: u64) -> CheckReport {
        self.provenance.seed = Some(seed);
        self
    }

    pub fn with_config_hash(mut self, h: impl Into<String>) -> CheckReport {
        self.provenance.config_hash = Some(h.into());
        self
    }

    pub fn push(&mut self, child: CheckReport) {
        if child.status > self.status {
            self.status = child.status;
        }
        self.children.push(child);
    }

    /// Applies `f` to this report and every descendant.
    pub fn for_each_mut(&mut self, f: &mut impl FnMut(&mut CheckReport)) {
        f(self);
        for c in &mut self.children {
            c.for_each_mut(f);
        }
    }

    /// First failing or erroring report in depth-first order.
    pub fn first_failure(&self) -> Option<&CheckReport> {
        if self.children.is_empty() {
            return (!self.passed()).then_some(self);
        }
        self.children.iter().find_map(CheckReport::first_failure).or_else(|| (!self.passed()).then_some(self))
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_canonical_json(&self) -> String {
        canonical_json(&self.to_value())
    }
}

/// Pretty-prints with object keys in sorted order.
pub fn canonical_json(v: &Value) -> String {
    // serde_json's default map is ordered by key.
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

/// Hex SHA-256 of the canonical compact form of `v`.
pub fn config_hash(v: &Value) -> String {
    let compact = serde_json::to_string(v).expect("value serializes");
    hex::encode(Sha256::digest(compact.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_takes_worst_status() {
        let g = CheckReport::group(
            "all",
            vec![CheckReport::pass("a"), CheckReport::fail("b", "bad").with_witness([1, 2])],
        );
        assert_eq!(g.status, Status::Fail);
        assert_eq!(g.first_failure().unwrap().check, "b");
        let g = CheckReport::group("all", vec![CheckReport::pass("a"), CheckReport::lookup("t")]);
        assert!(g.passed());
    }

    #[test]
    fn canonical_json_sorts_keys() {
        let r = CheckReport::pass("x").with_metric("zeta", 1).with_metric("alpha", 2);
        let s = r.to_canonical_json();
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
        assert!(s.contains("\"status\": \"pass\""));
    }

    #[test]
    fn hash_is_stable() {
        let v = serde_json::json!({"b": 1, "a": [1, 2]});
        assert_eq!(config_hash(&v), config_hash(&serde_json::json!({"a": [1, 2], "b": 1})));
        assert_eq!(config_hash(&v).len(), 64);
    }
}
