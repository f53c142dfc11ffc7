//! CSV and JSON serialisation of reports.

use std::path::{Path, PathBuf};

use crate::config::Format;
use crate::error::CliError;
use crate::report::Report;

pub const CSV_COLUMNS: [&str; 8] = ["suite", "check_id", "anchor", "lhs", "rhs", "margin", "tol", "status"];

fn num(v: f64) -> String {
    format!("{v:e}")
}

pub fn to_csv(report: &Report) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(io)?;
    for r in &report.records {
        w.write_record([
            r.suite.clone(),
            r.check_id.clone(),
            r.anchor.clone(),
            num(r.lhs),
            num(r.rhs),
            num(r.margin),
            num(r.tol),
            r.status.as_str().to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

pub fn to_json(report: &Report) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<Report, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

pub fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => to_csv(report),
        Format::Json => to_json(report),
    }
}

/// Writes `report.csv` or `report.json` into `dir`, creating it if needed.
pub fn emit_tables(report: &Report, format: Format, dir: &Path) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(match format {
        Format::Csv => "report.csv",
        Format::Json => "report.json",
    });
    std::fs::write(&path, render(report, format)?)?;
    Ok(path)
}
