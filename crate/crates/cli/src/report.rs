//! Reports and their canonical JSON / text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorClass {
    Schema,
    Precondition,
    Invariant,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Schema => 2,
            ErrorClass::Precondition => 3,
            ErrorClass::Invariant => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub class: ErrorClass,
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryReport {
    pub index: usize,
    pub cmd: String,
    pub query: Value,
    pub status: Status,
    pub verdict: Option<String>,
    pub certificates: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
    pub error: Option<ErrorRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub bundle: String,
    pub results: Vec<QueryReport>,
}

impl Report {
    /// `0` when every query succeeded, otherwise the code of the worst error.
    pub fn exit_code(&self) -> i32 {
        self.results
            .iter()
            .filter_map(|r| r.error.as_ref().map(|e| e.class))
            .max()
            .map_or(0, ErrorClass::exit_code)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => emit_json(report),
        Format::Text => emit_text(report),
    }
}

/// Pretty JSON with keys sorted at every level.
pub fn emit_json(report: &Report) -> String {
    // serde_json's map is ordered by key, so going through Value sorts everything
    let value = serde_json::to_value(report).expect("reports serialize");
    let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
    out.push('\n');
    out
}

pub fn parse_json(text: &str) -> serde_json::Result<Report> {
    serde_json::from_str(text)
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(compact).collect();
            format!("({})", parts.join(", "))
        }
        other => other.to_string(),
    }
}

/// Rows of objects sharing one key set render as an aligned table.
fn table(rows: &[Value]) -> Option<String> {
    let first = rows.first()?.as_object()?;
    let keys: Vec<&String> = first.keys().collect();
    let mut cells: Vec<Vec<String>> = vec![keys.iter().map(|k| k.to_string()).collect()];
    for r in rows {
        let obj = r.as_object()?;
        if obj.len() != keys.len() {
            return None;
        }
        cells.push(keys.iter().map(|k| obj.get(*k).map_or(String::new(), compact)).collect());
    }
    let widths: Vec<usize> = (0..keys.len())
        .map(|c| cells.iter().map(|row| row[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}", w = *w))
            .collect();
        let _ = writeln!(out, "    {}", line.join("  ").trim_end());
    }
    Some(out)
}

pub fn emit_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "bundle: {}", if report.bundle.is_empty() { "-" } else { &report.bundle });
    for r in &report.results {
        let status = match r.status {
            Status::Ok => "ok",
            Status::Error => "error",
        };
        let _ = writeln!(out, "[{}] {} ({status})", r.index, r.cmd);
        if let Some(v) = &r.verdict {
            let _ = writeln!(out, "  verdict: {v}");
        }
        for (key, value) in &r.certificates {
            match value {
                Value::Array(rows) if rows.iter().any(Value::is_object) => match table(rows) {
                    Some(t) => {
                        let _ = writeln!(out, "  {key}:");
                        out.push_str(&t);
                    }
                    None => {
                        let _ = writeln!(out, "  {key}: {value}");
                    }
                },
                Value::Object(map) => {
                    let _ = writeln!(out, "  {key}:");
                    for (k, v) in map {
                        let _ = writeln!(out, "    {k}: {}", compact(v));
                    }
                }
                other => {
                    let _ = writeln!(out, "  {key}: {}", compact(other));
                }
            }
        }
        for w in &r.warnings {
            let _ = writeln!(out, "  warning: {w}");
        }
        if let Some(e) = &r.error {
            let class = match e.class {
                ErrorClass::Schema => "schema",
                ErrorClass::Precondition => "precondition",
                ErrorClass::Invariant => "invariant",
            };
            let _ = writeln!(out, "  error ({class}) at {}: {}", e.path, e.message);
        }
    }
    out
}
