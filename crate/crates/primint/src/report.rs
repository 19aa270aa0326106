//! Machine-readable results.

use std::collections::BTreeMap;

use primint_core::QuadResult;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::job::{JobSpec, Real};

/// One check of a verification suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    /// `suite.check[.case]`
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

impl SuiteRow {
    pub fn new(id: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        SuiteRow { id: id.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub command: String,
    /// The job with defaults filled in; running it again reproduces the report.
    pub spec: JobSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Real>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_estimate: Option<Real>,
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    pub wall_time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<Vec<SuiteRow>>,
}

impl Report {
    pub fn new(spec: &JobSpec) -> Self {
        Report {
            command: spec.command.clone(),
            spec: spec.resolved(),
            value: None,
            values: BTreeMap::new(),
            error_estimate: None,
            converged: true,
            depth: None,
            wall_time: 0.0,
            suite: None,
        }
    }

    pub fn exact(mut self, v: f64) -> Self {
        self.value = Some(Real(v));
        self.error_estimate = Some(Real(0.0));
        self
    }

    pub fn quad(mut self, q: &QuadResult) -> Self {
        self.value = Some(Real(q.value));
        self.error_estimate = Some(Real(q.error_estimate));
        self.converged = q.converged;
        self.depth = Some(q.depth);
        self
    }

    pub fn with(mut self, key: &str, v: impl Serialize) -> Self {
        self.values.insert(key.to_string(), serde_json::to_value(v).expect("report values serialize"));
        self
    }

    pub fn passed(&self) -> bool {
        self.suite.as_ref().is_none_or(|rows| rows.iter().all(|r| r.passed))
    }

    /// 0 when converged and every suite row passed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.converged && self.passed() {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The JSON with the wall time zeroed, for reproducibility comparisons.
    pub fn canonical_json(&self) -> String {
        Report { wall_time: 0.0, ..self.clone() }.to_json()
    }

    /// Short human-readable summary.
    pub fn summary(&self) -> String {
        let mut s = format!("{}:", self.command);
        if let Some(v) = self.value {
            s.push_str(&format!(" value {}", v.0));
        }
        if let Some(e) = self.error_estimate {
            s.push_str(&format!(" (err {:.3e})", e.0));
        }
        if !self.converged {
            s.push_str(" NOT CONVERGED");
        }
        if let Some(rows) = &self.suite {
            let failed = rows.iter().filter(|r| !r.passed).count();
            s.push_str(&format!(" {} checks, {} failed", rows.len(), failed));
            for r in rows.iter().filter(|r| !r.passed) {
                s.push_str(&format!("\n  FAIL {}: {}", r.id, r.detail));
            }
        }
        s.push_str(&format!(" [{:.2} s]", self.wall_time));
        s
    }
}
