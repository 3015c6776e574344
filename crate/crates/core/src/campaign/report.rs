use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};

/// One failed check. For tower claims `q` is the generator and `e` the
/// prime power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub q: u64,
    pub e: u64,
    pub expected: u64,
    pub actual: u64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Violation {
    pub fn new(q: u64, e: u64, expected: u64, actual: u64) -> Self {
        Self {
            q,
            e,
            expected,
            actual,
            detail: String::new(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// Partial result of one shard of a sweep. Merging is associative, so shards
/// can finish in any order as long as they are merged in modulus order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub checks: u64,
    pub violations: Vec<Violation>,
    pub equality_cases: Vec<(u64, u64)>,
    pub stats: BTreeMap<String, u64>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, violation: impl FnOnce() -> Violation) {
        self.checks += 1;
        if !ok {
            self.violations.push(violation());
        }
    }

    pub fn bump(&mut self, key: &str) {
        *self.stats.entry(key.to_string()).or_default() += 1;
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.checks += other.checks;
        self.violations.extend(other.violations);
        self.equality_cases.extend(other.equality_cases);
        for (k, v) in other.stats {
            *self.stats.entry(k).or_default() += v;
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim_id: String,
    pub domain: String,
    pub params: serde_json::Value,
    pub checks: u64,
    pub violations: Vec<Violation>,
    pub elapsed_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equality_cases: Option<Vec<(u64, u64)>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub stats: BTreeMap<String, u64>,
}

impl VerificationReport {
    pub fn from_tally(
        claim_id: &str,
        domain: impl Into<String>,
        params: serde_json::Value,
        tally: Tally,
        elapsed: Duration,
    ) -> Self {
        Self {
            claim_id: claim_id.to_string(),
            domain: domain.into(),
            params,
            checks: tally.checks,
            violations: tally.violations,
            elapsed_ms: elapsed.as_secs_f64() * 1e3,
            equality_cases: None,
            stats: tally.stats,
        }
    }

    pub fn verified(&self) -> bool {
        self.violations.is_empty()
    }

    /// The report with its timing zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        Self {
            elapsed_ms: 0.0,
            ..self.clone()
        }
    }
}
