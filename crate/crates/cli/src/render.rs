//! Human-readable tables for reports.

use std::fmt::Write;

use serde_json::Value;

use crate::run::{QueryResult, RunReport};

fn status(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .map(|a| a.iter().map(|x| x.as_str().unwrap_or_default().to_string()).collect())
        .unwrap_or_default()
}

fn table(v: &Value) -> String {
    match v.as_object() {
        Some(m) if !m.is_empty() => m
            .iter()
            .map(|(k, n)| format!("{k}:{}", n.as_str().unwrap_or_default()))
            .collect::<Vec<_>>()
            .join(" "),
        _ => "0".to_string(),
    }
}

fn body(r: &QueryResult, out: &mut String) {
    let d = &r.data;
    match r.kind.as_str() {
        "diamond" => {
            for row in d["rows"].as_array().into_iter().flatten() {
                let _ = writeln!(out, "    {}", strings(row).join(" "));
            }
        }
        "betti" => {
            let _ = writeln!(out, "    betti: {}", strings(&d["betti"]).join(" "));
        }
        "ring" => {
            let _ = writeln!(
                out,
                "    {} ({}), unit {}",
                d["name"].as_str().unwrap_or(""),
                d["mode"].as_str().unwrap_or(""),
                d["unit"].as_str().unwrap_or("")
            );
            for b in d["basis"].as_array().into_iter().flatten() {
                let _ = writeln!(
                    out,
                    "    basis {} in degree {}",
                    b["label"].as_str().unwrap_or(""),
                    b["degree"].as_str().unwrap_or("")
                );
            }
            for p in d["products"].as_array().into_iter().flatten() {
                let _ = writeln!(
                    out,
                    "    {} * {} = {}",
                    p["left"].as_str().unwrap_or(""),
                    p["right"].as_str().unwrap_or(""),
                    p["product"].as_str().unwrap_or("")
                );
            }
        }
        "bc-aeppli" => {
            for key in ["dims", "row", "column", "bott_chern", "aeppli", "total"] {
                let _ = writeln!(out, "    {key:<10} {}", table(&d[key]));
            }
        }
        "truncated" => {
            for w in d["windows"].as_array().into_iter().flatten() {
                let _ = writeln!(
                    out,
                    "    [{},{}]  blow-up {}  expected {}",
                    w["s"].as_str().unwrap_or(""),
                    w["t"].as_str().unwrap_or(""),
                    table(&w["blowup"]),
                    table(&w["expected"])
                );
            }
        }
        "poly-check" => {
            let _ = writeln!(out, "    {:>3}  {:<9} weighted-degree", "r", "kronecker");
            for row in d["rows"].as_array().into_iter().flatten() {
                let _ = writeln!(
                    out,
                    "    {:>3}  {:<9} {}",
                    row["r"].as_str().unwrap_or(""),
                    status(row["kronecker"].as_bool().unwrap_or(false)),
                    status(row["weighted_degree"].as_bool().unwrap_or(false))
                );
            }
        }
        _ => {}
    }
    if r.kind != "poly-check" && r.kind != "truncated" {
        for c in &r.checks {
            let _ = writeln!(out, "    [{}] {}", status(c.passed), c.name);
        }
    }
    for c in r.checks.iter().filter(|c| !c.passed) {
        if let Some(detail) = &c.detail {
            let _ = writeln!(out, "      {}: {detail}", c.name);
        }
    }
}

pub fn text(report: &RunReport) -> String {
    let mut out = String::new();
    for r in &report.results {
        let target = if r.target.is_empty() {
            String::new()
        } else {
            format!(" {}", r.target)
        };
        let _ = writeln!(
            out,
            "[{}] {}{} ({} checks)",
            status(r.passed),
            r.kind,
            target,
            r.checks.len()
        );
        body(r, &mut out);
    }
    let failed = report.results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(out, "{} queries, {} failed", report.results.len(), failed);
    out
}
