//! Run reports: per-check records, a text table and line-delimited JSON.

use crate::error::{CurvError, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check: String,
    pub manifold: String,
    pub value: Option<f64>,
    pub residual: Option<f64>,
    pub tol: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Record {
    /// Passes when the residual is finite and within `tol`.
    pub fn within(check: impl Into<String>, manifold: &str, value: f64, residual: f64, tol: f64) -> Self {
        Record {
            check: check.into(),
            manifold: manifold.into(),
            value: Some(value),
            residual: Some(residual),
            tol: Some(tol),
            pass: residual.is_finite() && residual <= tol,
            note: None,
        }
    }

    /// A reported quantity with an externally decided outcome.
    pub fn info(check: impl Into<String>, manifold: &str, value: f64, pass: bool) -> Self {
        Record { check: check.into(), manifold: manifold.into(), value: Some(value), residual: None, tol: None, pass, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Records,
}

impl std::str::FromStr for Format {
    type Err = CurvError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "records" => Ok(Format::Records),
            _ => Err(CurvError::Config(format!("unknown format {s:?} (expected text or records)"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub records: Vec<Record>,
    pub verdicts: Vec<String>,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), ..Default::default() }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
}

fn num(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{v:.16e}"),
        _ => "null".into(),
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// One JSON object per line. Numbers carry 17 significant digits, so
/// parsing them back reproduces the doubles exactly.
pub fn records_output(report: &Report) -> String {
    let mut out = String::new();
    for r in &report.records {
        let _ = write!(
            out,
            "{{\"check\":{},\"manifold\":{},\"value\":{},\"residual\":{},\"tol\":{},\"pass\":{}",
            json_str(&r.check),
            json_str(&r.manifold),
            num(r.value),
            num(r.residual),
            num(r.tol),
            r.pass
        );
        if let Some(n) = &r.note {
            let _ = write!(out, ",\"note\":{}", json_str(n));
        }
        out.push_str("}\n");
    }
    out
}

pub fn parse_records(text: &str) -> Result<Vec<Record>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| CurvError::Config(format!("bad record line: {e}"))))
        .collect()
}

fn cell(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v:.6e}"),
        None => "-".into(),
    }
}

pub fn text_output(report: &Report) -> String {
    let header = ["check", "manifold", "value", "residual", "tol", "pass"];
    let rows: Vec<[String; 6]> = report
        .records
        .iter()
        .map(|r| [r.check.clone(), r.manifold.clone(), cell(r.value), cell(r.residual), cell(r.tol), if r.pass { "ok" } else { "FAIL" }.into()])
        .collect();
    let mut w = header.map(str::len);
    for row in &rows {
        for (k, c) in row.iter().enumerate() {
            w[k] = w[k].max(c.chars().count());
        }
    }
    let line = |cells: [&str; 6]| {
        let mut s = String::new();
        for (k, c) in cells.iter().enumerate() {
            let pad = w[k] - c.chars().count();
            if k >= 2 && k <= 4 {
                s.push_str(&" ".repeat(pad));
                s.push_str(c);
            } else {
                s.push_str(c);
                s.push_str(&" ".repeat(pad));
            }
            if k < 5 {
                s.push_str("  ");
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    for row in &rows {
        out.push_str(&line([&row[0], &row[1], &row[2], &row[3], &row[4], &row[5]]));
    }
    for r in report.records.iter().filter(|r| r.note.is_some()) {
        let _ = writeln!(out, "  {}: {}", r.check, r.note.as_deref().unwrap_or_default());
    }
    for v in &report.verdicts {
        let _ = writeln!(out, "verdict: {v}");
    }
    out
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Text => text_output(report),
        Format::Records => records_output(report),
    }
}

pub fn write_report(report: &Report, format: Format, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, emit(report, format)).map_err(|e| CurvError::IoFailure(format!("{}: {e}", path.display())))
}
