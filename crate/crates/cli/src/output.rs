use cupx::family::{FamilyReport, CSV_HEADER};
use serde_json::Value;

use crate::{CliError, Format};

/// A command's result in every format it supports.
pub(crate) struct Outcome {
    pub json: Value,
    /// CSV header and rows; defaults to one row of the top-level JSON keys.
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
    /// Human-readable text; defaults to `key: value` lines.
    pub human: Option<String>,
    pub edgelist: Option<String>,
    /// False when a check failed.
    pub passed: bool,
}

impl Outcome {
    pub fn new(json: Value) -> Self {
        Outcome {
            json,
            table: None,
            human: None,
            edgelist: None,
            passed: true,
        }
    }
}

/// Strings bare, `null` empty, everything else as compact JSON.
fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flat_table(json: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    match json {
        Value::Object(map) => (map.keys().cloned().collect(), vec![map.values().map(cell).collect()]),
        other => (vec!["value".into()], vec![vec![cell(other)]]),
    }
}

fn key_value_lines(json: &Value) -> String {
    match json {
        Value::Object(map) => map.iter().map(|(k, v)| format!("{k}: {}\n", cell(v))).collect(),
        other => format!("{}\n", cell(other)),
    }
}

pub(crate) fn family_table(report: &FamilyReport) -> (Vec<String>, Vec<Vec<String>>) {
    (
        CSV_HEADER.iter().map(|s| s.to_string()).collect(),
        report.entries.iter().map(|e| e.csv_row()).collect(),
    )
}

/// Columns padded to their widest cell.
pub(crate) fn aligned(header: &[String], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    std::iter::once(header)
        .chain(rows.iter().map(Vec::as_slice))
        .map(|r| {
            let line: Vec<String> = r.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
            format!("{}\n", line.join("  ").trim_end())
        })
        .collect()
}

pub(crate) fn render(outcome: &Outcome, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&outcome.json).expect("JSON values serialize")
        )),
        Format::Csv => {
            let (header, rows) = outcome.table.clone().unwrap_or_else(|| flat_table(&outcome.json));
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header)?;
            for r in &rows {
                w.write_record(r)?;
            }
            let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("CSV of UTF-8 cells is UTF-8"))
        }
        Format::Human => Ok(outcome.human.clone().unwrap_or_else(|| key_value_lines(&outcome.json))),
        Format::Edgelist => outcome
            .edgelist
            .clone()
            .ok_or_else(|| CliError::Usage("--format edgelist is only available for gen".into())),
    }
}
