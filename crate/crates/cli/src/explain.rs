use std::fmt::Write;

use cauchy_core::{Status, VerificationReport};
use serde_json::Value;

use crate::runner::RunSummary;

fn numbers(v: &[f64]) -> String {
    let cells: Vec<String> = v.iter().map(|x| format!("{x:.17e}")).collect();
    format!("[{}]", cells.join(", "))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    }
}

/// Human-readable rendering of one report.
pub fn explain(r: &VerificationReport) -> String {
    let mut out = String::new();
    let tag = match r.status {
        Status::Pass => "PASS",
        Status::Violation => "VIOLATION",
        Status::Error => "ERROR",
    };
    let _ = writeln!(out, "{tag} {} ({})", r.job, r.kind);
    let d = &r.diagnostics;
    if let Some(e) = d.get("error") {
        let _ = writeln!(out, "  error: {}", scalar(e));
    }
    if let (Some(t), Some(eps)) = (d.get("t"), d.get("eps")) {
        let _ = writeln!(out, "  singular sample: t={}, eps={}", scalar(t), scalar(eps));
    }
    if r.status != Status::Error || !r.left.is_empty() {
        let _ = writeln!(out, "  left:     {}", numbers(&r.left));
        let _ = writeln!(out, "  right:    {}", numbers(&r.right));
        let cmp = if r.residual <= r.tolerance { "<=" } else { ">" };
        let _ = writeln!(out, "  residual: {:e} {cmp} tolerance {:e}", r.residual, r.tolerance);
    }
    if let Some(Value::Array(checks)) = d.get("checks") {
        for c in checks.iter().skip(1) {
            let ok = c.get("passed").and_then(Value::as_bool).unwrap_or(false);
            let _ = writeln!(
                out,
                "  check {}: {} vs {} [{}]",
                c.get("name").map(scalar).unwrap_or_default(),
                c.get("residual").map(scalar).unwrap_or_default(),
                c.get("tolerance").map(scalar).unwrap_or_default(),
                if ok { "ok" } else { "failed" }
            );
        }
    }
    if let Some(w) = d.get("winding") {
        let _ = writeln!(out, "  winding={}", scalar(w));
    }
    if let Some(c) = d.get("worst_square_center") {
        let _ = writeln!(out, "  worst square centered at {c}");
    }
    if let Some(depth) = d.get("depth") {
        let _ = writeln!(out, "  depth={}", scalar(depth));
    }
    for key in ["verdict", "warning", "halving_ratio", "orientation_preserved"] {
        if let Some(v) = d.get(key) {
            let _ = writeln!(out, "  {key}: {}", scalar(v));
        }
    }
    out
}

pub fn explain_summary(s: &RunSummary) -> String {
    let mut out = String::new();
    for r in &s.reports {
        out.push_str(&explain(r));
    }
    let c = s.counts;
    let _ = writeln!(out, "{} pass, {} violation, {} error", c.pass, c.violation, c.error);
    out
}
