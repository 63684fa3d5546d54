//! CSV import: map a column pair from an arbitrary export file onto a sensor
//! id. Bad rows are collected, not fatal; the import succeeds with whatever
//! parsed cleanly.

use std::collections::BTreeMap;
use std::path::PathBuf;

use navlang::Timestamp;

use crate::error::{Failure, Result};
use crate::workspace::Workspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum DecimalSep {
    Point,
    Comma,
}

#[derive(Clone, Debug)]
pub struct ImportMapping {
    pub source: PathBuf,
    pub timestamp_column: String,
    pub value_column: String,
    pub sensor: String,
    pub decimal: DecimalSep,
    /// strftime-style pattern; `None` means `YYYY-MM-DDTHH:MM:SS`.
    pub timestamp_format: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RejectedRow {
    /// 1-based data row number (the header is row 0).
    pub row: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImportSummary {
    pub sensor: String,
    pub rows_read: usize,
    pub imported: usize,
    pub rejected: Vec<RejectedRow>,
    pub span: Option<(Timestamp, Timestamp)>,
}

fn valid_sensor_id(id: &str) -> bool {
    let mut chars = id.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn import_csv(ws: &Workspace, m: &ImportMapping, overwrite: bool) -> Result<ImportSummary> {
    if !valid_sensor_id(&m.sensor) {
        return Err(Failure::validation(format!(
            "`{}` is not a sensor id (letters, digits and _ only, not starting with a digit)",
            m.sensor
        )));
    }
    if ws.sensor_data_path(&m.sensor).exists() && !overwrite {
        return Err(Failure::validation(format!(
            "sensor `{}` already has stored data; pass --overwrite to replace it",
            m.sensor
        )));
    }
    let mut reader = csv::Reader::from_path(&m.source)
        .map_err(|e| Failure::io(format!("cannot read {}: {e}", m.source.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Failure::io(format!("cannot read {} header: {e}", m.source.display())))?
        .clone();
    let column = |name: &str| -> Result<usize> {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            Failure::validation(format!(
                "column `{name}` not found in {}; file has: {}",
                m.source.display(),
                headers.iter().collect::<Vec<_>>().join(", ")
            ))
        })
    };
    let t_col = column(&m.timestamp_column)?;
    let v_col = column(&m.value_column)?;

    // First occurrence of a timestamp wins; later duplicates are rejected.
    let mut by_time: BTreeMap<Timestamp, (usize, f64)> = BTreeMap::new();
    let mut rejected = Vec::new();
    let mut rows_read = 0usize;
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        rows_read += 1;
        let mut reject = |reason: String| rejected.push(RejectedRow { row, reason });
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                reject(format!("malformed row: {e}"));
                continue;
            }
        };
        let field = |col: usize| record.get(col).unwrap_or("").trim();
        let t_text = field(t_col);
        let t = match &m.timestamp_format {
            Some(fmt) => Timestamp::parse_with_format(t_text, fmt),
            None => Timestamp::parse(t_text),
        };
        let Ok(t) = t else {
            reject(format!("unparseable timestamp `{t_text}`"));
            continue;
        };
        let v_text = field(v_col);
        let normalized = match m.decimal {
            DecimalSep::Point => v_text.to_string(),
            DecimalSep::Comma => v_text.replace(',', "."),
        };
        let v: f64 = match normalized.parse() {
            Ok(v) if f64::is_finite(v) => v,
            Ok(_) => {
                reject(format!("non-finite value `{v_text}`"));
                continue;
            }
            Err(_) => {
                reject(format!("unparseable number `{v_text}`"));
                continue;
            }
        };
        match by_time.entry(t) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert((row, v));
            }
            std::collections::btree_map::Entry::Occupied(first) => {
                reject(format!("duplicate timestamp {t} (first seen at row {})", first.get().0));
            }
        }
    }

    let rows: Vec<(Timestamp, f64)> = by_time.iter().map(|(t, (_, v))| (*t, *v)).collect();
    ws.store_raw(&m.sensor, &rows)?;
    Ok(ImportSummary {
        sensor: m.sensor.clone(),
        rows_read,
        imported: rows.len(),
        span: rows.first().map(|(lo, _)| (*lo, rows.last().unwrap().0)),
        rejected,
    })
}
