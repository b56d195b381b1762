//! Manifest driver. One command per line, written as on the command line
//! without the program name, optionally followed by `=> <sha256>` of the
//! expected standard output. Blank lines and `#` comments are skipped.

use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{run, CliError, Report};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchLine {
    pub line: usize,
    pub command: String,
    pub expected: Option<String>,
}

pub fn parse_manifest(text: &str) -> Vec<BatchLine> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                return None;
            }
            let (command, expected) = match body.rsplit_once("=>") {
                Some((c, h)) => (c.trim(), Some(h.trim().to_ascii_lowercase())),
                None => (body, None),
            };
            Some(BatchLine {
                line: i + 1,
                command: command.to_string(),
                expected,
            })
        })
        .collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn run_line(l: &BatchLine) -> Value {
    let args = match shlex::split(&l.command) {
        Some(a) if !a.is_empty() => a,
        _ => {
            return json!({"line": l.line, "command": l.command, "status": "error",
                          "exit_code": 2, "error": "cannot split command line"})
        }
    };
    if args[0] == "batch" {
        return json!({"line": l.line, "command": l.command, "status": "error",
                      "exit_code": 2, "error": "nested batch is not allowed"});
    }
    let out = run(std::iter::once("liouville".to_string()).chain(args));
    let digest = sha256_hex(out.stdout.as_bytes());
    let status = match (&l.expected, out.code) {
        (_, c) if c != 0 => "error",
        (Some(h), _) if *h == digest => "pass",
        (Some(_), _) => "fail",
        (None, _) => "ran",
    };
    let output = serde_json::from_str::<Value>(&out.stdout).unwrap_or(Value::String(out.stdout));
    let mut v = json!({
        "line": l.line,
        "command": l.command,
        "exit_code": out.code,
        "sha256": digest,
        "status": status,
        "output": output,
    });
    if let Some(h) = &l.expected {
        v["expected"] = json!(h);
    }
    if !out.stderr.is_empty() {
        v["error"] = json!(out.stderr.trim_end());
    }
    v
}

/// Runs every line (in parallel) and reports in manifest order.
pub fn run_manifest(text: &str) -> Report {
    let lines = parse_manifest(text);
    let results: Vec<Value> = lines.par_iter().map(run_line).collect();
    let count = |s: &str| results.iter().filter(|r| r["status"] == s).count();
    let (passed, failed, errors, ran) = (count("pass"), count("fail"), count("error"), count("ran"));
    let mut text = String::new();
    for r in &results {
        text.push_str(&format!(
            "{:>4} {:<5} {}\n",
            r["line"].as_u64().unwrap_or_default(),
            r["status"].as_str().unwrap_or_default(),
            r["command"].as_str().unwrap_or_default()
        ));
    }
    text.push_str(&format!("{passed} passed, {failed} failed, {errors} errors, {ran} unchecked"));
    let mut report = Report::new(
        json!({
            "results": results,
            "summary": {"total": lines.len(), "passed": passed, "failed": failed, "errors": errors, "unchecked": ran},
        }),
        text,
    );
    report.code = if failed + errors > 0 { 1 } else { 0 };
    report
}

pub(crate) fn batch(path: &Path) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read manifest {}: {e}", path.display())))?;
    Ok(run_manifest(&text))
}
