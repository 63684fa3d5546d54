//! Exports of stored results: tabular CSV, structured JSON, plot data.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use navlang::report::{build_plot_data, PlotKind};
use navlang::timeseries::TimeGrid;
use navlang::VirtualSensor;
use serde::Serialize;

use crate::error::{Failure, Result};
use crate::pipeline::{load_results, LoadedResults};
use crate::workspace::Workspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ExportFormat {
    /// CSV: one row per timestamp, one column per selected series.
    Tabular,
    /// JSON with grid metadata mirroring the tabular content.
    Structured,
}

fn available(loaded: &LoadedResults) -> String {
    let names: Vec<&str> = loaded.series.keys().map(|s| s.as_str()).collect();
    if names.is_empty() { "none".to_string() } else { names.join(", ") }
}

fn pick<'a>(loaded: &'a LoadedResults, name: &str) -> Result<&'a VirtualSensor> {
    loaded.series.get(name).ok_or_else(|| {
        Failure::validation(format!(
            "unknown series `{name}`; available: {}",
            available(loaded)
        ))
    })
}

#[derive(Serialize)]
struct StructuredExport<'a> {
    grid: &'a TimeGrid,
    series: Vec<&'a VirtualSensor>,
}

/// Write the selected series in the requested shape; returns the output path.
pub fn export_results(
    ws: &Workspace,
    names: &[String],
    format: ExportFormat,
    out: Option<&Path>,
) -> Result<PathBuf> {
    let loaded = load_results(ws)?;
    if names.is_empty() {
        return Err(Failure::validation(format!(
            "nothing selected for export; available: {}",
            available(&loaded)
        )));
    }
    let picked: Vec<&VirtualSensor> =
        names.iter().map(|n| pick(&loaded, n)).collect::<Result<_>>()?;

    let (default_name, body) = match format {
        ExportFormat::Tabular => {
            let grid = &loaded.manifest.grid;
            let mut csv = String::from("timestamp");
            for name in names {
                csv.push(',');
                csv.push_str(name);
            }
            csv.push('\n');
            for (i, t) in grid.timestamps().enumerate() {
                let _ = write!(csv, "{t}");
                for vs in &picked {
                    csv.push(',');
                    csv.push_str(&vs.series.sample_text(i));
                }
                csv.push('\n');
            }
            ("export.csv", csv)
        }
        ExportFormat::Structured => {
            let doc = StructuredExport { grid: &loaded.manifest.grid, series: picked };
            let mut json = serde_json::to_string_pretty(&doc)
                .map_err(|e| Failure::io(format!("cannot serialize export: {e}")))?;
            json.push('\n');
            ("export.json", json)
        }
    };

    let path = match out {
        Some(p) => p.to_path_buf(),
        None => ws.results_dir().join(default_name),
    };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| Failure::io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    fs::write(&path, body)
        .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotKindArg {
    Line,
    Scatter,
    Carpet,
}

impl From<PlotKindArg> for PlotKind {
    fn from(k: PlotKindArg) -> Self {
        match k {
            PlotKindArg::Line => PlotKind::Line,
            PlotKindArg::Scatter => PlotKind::Scatter,
            PlotKindArg::Carpet => PlotKind::Carpet,
        }
    }
}

/// Extract plot-ready data for stored series and write it as JSON.
pub fn write_plot(
    ws: &Workspace,
    kind: PlotKindArg,
    names: &[String],
    out: Option<&Path>,
) -> Result<PathBuf> {
    let loaded = load_results(ws)?;
    let mut inputs = Vec::new();
    for name in names {
        inputs.push((name.as_str(), &pick(&loaded, name)?.series));
    }
    let data = build_plot_data(kind.into(), &inputs)
        .map_err(|e| Failure::validation(e.to_string()))?;
    let mut json = serde_json::to_string_pretty(&data)
        .map_err(|e| Failure::io(format!("cannot serialize plot: {e}")))?;
    json.push('\n');
    let path = match out {
        Some(p) => p.to_path_buf(),
        None => ws.reports_dir().join("plot.json"),
    };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| Failure::io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    fs::write(&path, json)
        .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}
