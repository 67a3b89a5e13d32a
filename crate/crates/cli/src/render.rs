//! Plain-text rendering. Floats use six significant digits.

use std::fmt::Write;

use mixed3::catalog::EntrySummary;
use mixed3::verifier::{CheckReport, Metric, Relation, Status};
use serde_json::Value;

pub fn sci(x: f64) -> String {
    // drop the sign of negative zero
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.5e}")
}

pub fn examples(list: &[EntrySummary]) -> String {
    let mut out = String::new();
    for e in list {
        let x = &e.expected;
        let xi: Vec<String> = x.xi.iter().map(|t| format!("{t:?}")).collect();
        let mut flags = Vec::new();
        if x.totally_geodesic {
            flags.push("totally-geodesic");
        }
        if x.minimal {
            flags.push("minimal");
        }
        if x.flat == Some(true) {
            flags.push("flat");
        }
        let _ = writeln!(out, "{}  dim {} in {}", e.id, e.dim, e.ambient);
        let _ = writeln!(out, "    kind {:?}  xi [{}]  {}", x.kind, xi.join(", "), flags.join("+"));
        if let Some(c) = x.induced_class {
            let _ = writeln!(out, "    induced structure {c:?}");
        }
        let _ = writeln!(out, "    anchor: {}", e.anchor);
    }
    out
}

fn status_word(s: &Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skipped(_) => "SKIP",
    }
}

fn metric_line(m: &Metric) -> String {
    match m.relation {
        Relation::Below => format!("{}  {} < {}", m.name, sci(m.value), sci(m.bound)),
        Relation::Above => format!("{}  {} > {}", m.name, sci(m.value), sci(m.bound)),
        Relation::Info => format!("{}  {}  (info)", m.name, sci(m.value)),
    }
}

pub fn reports(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(
            out,
            "{}  {}  max_residual {}  tolerance {}  points {}  seed {}  {} ms",
            r.check_id,
            status_word(&r.status),
            sci(r.max_residual),
            sci(r.tolerance),
            r.points,
            r.seed,
            r.wall_time_ms
        );
        let _ = writeln!(out, "    anchor: {}", r.anchor);
        if !r.example_ids.is_empty() {
            let _ = writeln!(out, "    examples: {}", r.example_ids.join(", "));
        }
        if let Status::Skipped(why) = &r.status {
            let _ = writeln!(out, "    skipped: {why}");
        }
        if let Some(e) = &r.error {
            let _ = writeln!(out, "    error: {e}");
        }
        for m in &r.metrics {
            let mark = if m.passes() { " " } else { "!" };
            let _ = writeln!(out, "  {mark} {}", metric_line(m));
        }
    }
    let pass = reports.iter().filter(|r| r.passed()).count();
    let fail = reports.iter().filter(|r| r.failed()).count();
    let _ = writeln!(
        out,
        "{} checks: {pass} passed, {fail} failed, {} skipped",
        reports.len(),
        reports.len() - pass - fail
    );
    out
}

/// Indented tree of a JSON value, numbers in scientific notation.
pub fn tree(v: &Value) -> String {
    let mut out = String::new();
    walk(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) if n.is_f64() => n.as_f64().map(sci),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    match v {
        Value::Array(items) if items.iter().all(|i| scalar(i).is_some()) => {
            Some(format!("[{}]", items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn walk(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                match inline(child) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        walk(out, child, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for child in items {
                match inline(child) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        walk(out, child, depth + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn tree_inlines_vectors() {
        let t = tree(&json!({"xi": [[1.0, -0.5]], "kind": "Invariant", "dims": [1, 2]}));
        assert!(t.contains("- [1.00000e0, -5.00000e-1]"));
        assert!(t.contains("kind: Invariant"));
        assert!(t.contains("dims: [1, 2]"));
    }
}
