use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// Whether the run upheld every theorem it checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Falsified,
    /// The input itself was rejected (an invalid relation).
    Invalid,
}

impl Status {
    pub fn from_ok(ok: bool) -> Status {
        if ok {
            Status::Ok
        } else {
            Status::Falsified
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Falsified => 1,
            Status::Invalid => 2,
        }
    }
}

/// Records (one per relation, slice or law) plus a closing summary.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub records: Vec<Map<String, Value>>,
    pub summary: Map<String, Value>,
    pub status: Status,
}

pub fn object<T: Serialize>(value: &T) -> Map<String, Value> {
    match serde_json::to_value(value).expect("report types serialize") {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        Value::Array(_) | Value::Object(_) => v.to_string(),
    }
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut out = String::new();
                for r in &self.records {
                    out.push_str(&serde_json::to_string(r).expect("json"));
                    out.push('\n');
                }
                let tail = serde_json::json!({
                    "command": self.command,
                    "status": self.status,
                    "summary": self.summary,
                });
                out.push_str(&tail.to_string());
                out.push('\n');
                out
            }
            OutputFormat::Csv => {
                // a flat projection of the records; nested values become JSON text
                let rows: Vec<&Map<String, Value>> =
                    if self.records.is_empty() { vec![&self.summary] } else { self.records.iter().collect() };
                let header: Vec<&String> = rows[0].keys().collect();
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&header).expect("in-memory csv");
                for r in rows {
                    w.write_record(header.iter().map(|k| r.get(*k).map(cell).unwrap_or_default())).expect("in-memory csv");
                }
                String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
            }
            OutputFormat::Text => {
                let mut out = String::new();
                let line = |out: &mut String, m: &Map<String, Value>| {
                    let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}={}", cell(v))).collect();
                    out.push_str(&parts.join("  "));
                    out.push('\n');
                };
                for r in &self.records {
                    line(&mut out, r);
                }
                let _ = write!(out, "{} {:?}: ", self.command, self.status);
                line(&mut out, &self.summary);
                out
            }
        }
    }
}
