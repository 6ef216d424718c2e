use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::time::Instant;

use crate::error::{Error, Result};

/// Default tolerance for every check.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Violation,
    Error,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Violation => "violation",
            Status::Error => "error",
        })
    }
}

/// Outcome of one two-sided check.
///
/// `residual`/`tolerance` describe the primary comparison. Secondary
/// comparisons are listed under `diagnostics.checks`; the status accounts
/// for all of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub job: String,
    pub kind: String,
    pub status: Status,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub diagnostics: Map<String, Value>,
    pub runtime_ms: f64,
}

impl VerificationReport {
    /// An error report. Numeric fields are zero so the report stays valid
    /// JSON; the message is under `diagnostics.error`.
    pub fn error(kind: &str, tolerance: f64, err: &Error, mut diagnostics: Map<String, Value>) -> Self {
        diagnostics.insert("error".into(), Value::String(err.to_string()));
        Self {
            job: kind.to_string(),
            kind: kind.to_string(),
            status: Status::Error,
            left: Vec::new(),
            right: Vec::new(),
            residual: 0.0,
            tolerance,
            diagnostics,
            runtime_ms: 0.0,
        }
    }

    pub fn diagnostic(&self, key: &str) -> Option<&Value> {
        self.diagnostics.get(key)
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Accumulates sides, checks and diagnostics, then derives the status.
#[derive(Debug)]
pub(crate) struct ReportBuilder {
    kind: &'static str,
    started: Instant,
    left: Vec<f64>,
    right: Vec<f64>,
    checks: Vec<(String, f64, f64)>,
    diagnostics: Map<String, Value>,
    forced_error: Option<String>,
}

impl ReportBuilder {
    pub(crate) fn new(kind: &'static str, inputs: Value) -> Self {
        let mut diagnostics = Map::new();
        diagnostics.insert("inputs".into(), inputs);
        Self {
            kind,
            started: Instant::now(),
            left: Vec::new(),
            right: Vec::new(),
            checks: Vec::new(),
            diagnostics,
            forced_error: None,
        }
    }

    pub(crate) fn sides(&mut self, left: Vec<f64>, right: Vec<f64>) -> &mut Self {
        self.left = left;
        self.right = right;
        self
    }

    /// The first check registered is the primary one.
    pub(crate) fn check(&mut self, name: &str, residual: f64, tolerance: f64) -> &mut Self {
        self.checks.push((name.to_string(), residual, tolerance));
        self
    }

    pub(crate) fn diag(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.diagnostics.insert(key.to_string(), v);
        self
    }

    /// Marks the report as an error regardless of the residuals.
    pub(crate) fn fail(&mut self, message: String) -> &mut Self {
        self.forced_error = Some(message);
        self
    }

    fn elapsed_ms(&self) -> f64 {
        self.started.elapsed().as_secs_f64() * 1e3
    }

    pub(crate) fn finish(mut self) -> VerificationReport {
        let finite = self.left.iter().chain(&self.right).all(|v| v.is_finite())
            && self.checks.iter().all(|c| c.1.is_finite());
        let status = if self.forced_error.is_some() || !finite || self.checks.is_empty() {
            Status::Error
        } else if self.checks.iter().any(|(_, r, t)| r > t) {
            Status::Violation
        } else {
            Status::Pass
        };
        if let Some(msg) = self.forced_error.take() {
            self.diagnostics.insert("error".into(), Value::String(msg));
        }
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|(name, r, t)| json!({"name": name, "residual": finite_or_zero(*r), "tolerance": t, "passed": r <= t}))
            .collect();
        self.diagnostics.insert("checks".into(), Value::Array(checks));
        let (residual, tolerance) = self
            .checks
            .first()
            .map(|c| (finite_or_zero(c.1), c.2))
            .unwrap_or((0.0, 0.0));
        let sanitize = |v: Vec<f64>| v.into_iter().map(finite_or_zero).collect();
        let runtime_ms = self.elapsed_ms();
        VerificationReport {
            job: self.kind.to_string(),
            kind: self.kind.to_string(),
            status,
            left: sanitize(std::mem::take(&mut self.left)),
            right: sanitize(std::mem::take(&mut self.right)),
            residual,
            tolerance,
            diagnostics: self.diagnostics,
            runtime_ms,
        }
    }

    /// Error report carrying the inputs gathered so far.
    pub(crate) fn error(self, err: &Error) -> VerificationReport {
        let runtime_ms = self.elapsed_ms();
        let tol = self.checks.first().map(|c| c.2).unwrap_or(DEFAULT_TOL);
        let mut r = VerificationReport::error(self.kind, tol, err, self.diagnostics);
        r.runtime_ms = runtime_ms;
        r
    }
}

fn finite_or_zero(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// Runs `body`, turning an `Err` into an error report.
pub(crate) fn run(
    kind: &'static str,
    inputs: Value,
    tol: f64,
    body: impl FnOnce(&mut ReportBuilder) -> Result<()>,
) -> VerificationReport {
    let mut b = ReportBuilder::new(kind, inputs);
    if !(tol >= 0.0 && tol.is_finite()) {
        return b.error(&Error::Invalid(format!("tolerance must be a finite non-negative number, got {tol}")));
    }
    match body(&mut b) {
        Ok(()) => b.finish(),
        Err(e) => {
            b.checks.clear();
            b.checks.push((String::new(), 0.0, tol));
            b.error(&e)
        }
    }
}
