//! The run pipeline: raw data → grid-aligned series → evaluation → tickets →
//! reports. Also the loader for stored results, shared by the stage commands
//! (`tickets`, `report`) and by export/plot.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;

use navlang::eval::{evaluate_tolerant, fulfillment, EvalOptions, FulfillmentScore, MetricResult};
use navlang::report::{render_report, CommentStore, ReportInputs, ReportTemplate};
use navlang::timeseries::{
    align_logic_to_grid, align_to_grid, detect_outliers, interpolate_gaps, PreprocessConfig,
    SeriesKind,
};
use navlang::tickets::{
    extract_violations, merge_tickets, open_tickets, Ticket, TicketConfig, TicketStatus,
};
use navlang::{
    validate_spec, SensorMeta, Specification, TimeGrid, TimeSeries, Timestamp, VirtualSensor,
};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Failure, Result};
use crate::workspace::{read_json, write_json, Workspace};

/// Index of one run's outputs, written next to them under `results/`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub grid: TimeGrid,
    pub series: Vec<SeriesEntry>,
    pub metrics: Vec<String>,
    pub fulfillment: Vec<FulfillmentScore>,
    pub skipped: Vec<SkippedArtifact>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub name: String,
    pub kind: SeriesKind,
    pub file: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SkippedArtifact {
    pub artifact: String,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TicketCounts {
    pub open: usize,
    pub resolved: usize,
    /// Tickets that did not exist before this run.
    pub fresh: usize,
}

pub struct RunSummary {
    pub grid: TimeGrid,
    pub sensors: usize,
    pub evaluated: usize,
    pub skipped: Vec<SkippedArtifact>,
    pub fulfillment: Vec<FulfillmentScore>,
    pub tickets: TicketCounts,
    pub reports: Vec<String>,
    /// Templates that failed to render, with the reason. Non-empty makes the
    /// run partial, like a skipped artifact.
    pub report_failures: Vec<(String, String)>,
}

impl RunSummary {
    pub fn is_partial(&self) -> bool {
        !self.skipped.is_empty() || !self.report_failures.is_empty()
    }
}

/// Virtual-sensor names become file names; artifact ids never contain `/`
/// or `.`, so the mapping is collision-free.
fn series_file(name: &str) -> String {
    format!("{}.json", name.replace('/', "."))
}

/// Full pipeline, all stages. Nothing is written unless the specification
/// validates. A `grid step` declared in the specification wins over the
/// configured one.
pub fn run_pipeline(ws: &Workspace, cfg: &RunConfig, now: Timestamp) -> Result<RunSummary> {
    let spec = ws.load_spec()?;
    let catalog = data_catalog(ws, &spec);
    let diags = validate_spec(&spec, &catalog);
    for d in diags.iter() {
        eprintln!("{d}");
    }
    if diags.has_errors() {
        return Err(Failure::validation(
            "specification has validation errors; no results were written",
        ));
    }

    let step = spec.grid_step.unwrap_or(cfg.grid_step);
    let (grid, data) = preprocess(ws, &spec, &catalog, cfg, step)?;
    let (results, failures) =
        evaluate_tolerant(&spec, &data, grid, EvalOptions::default())
            .map_err(|e| Failure::validation(e.to_string()))?;
    let skipped: Vec<SkippedArtifact> = failures
        .iter()
        .map(|(artifact, reason)| SkippedArtifact {
            artifact: artifact.clone(),
            reason: reason.to_string(),
        })
        .collect();

    let mut scores = Vec::new();
    for rule in spec.rules() {
        if let Some(samples) = results.logic_samples(&rule.name) {
            scores.push(fulfillment(&rule.name, samples));
        }
    }

    // Persist: preprocessed sensors and every virtual sensor, one file each.
    let mut all_series: BTreeMap<String, VirtualSensor> = data
        .iter()
        .map(|(id, series)| {
            (id.clone(), VirtualSensor { name: id.clone(), series: series.clone() })
        })
        .collect();
    all_series.extend(results.virtual_sensors);
    let evaluated = spec
        .artifacts
        .iter()
        .filter(|a| !failures.contains_key(a.name()))
        .count();

    for dir in [ws.series_dir(), ws.metrics_dir()] {
        if dir.exists() {
            fs::remove_dir_all(&dir)
                .map_err(|e| Failure::io(format!("cannot clear {}: {e}", dir.display())))?;
        }
    }
    for (name, vs) in &all_series {
        write_json(&ws.series_dir().join(series_file(name)), vs)?;
    }
    for (name, metric) in &results.metrics {
        write_json(&ws.metrics_dir().join(format!("{name}.json")), metric)?;
    }
    let manifest = Manifest {
        grid,
        series: all_series
            .iter()
            .map(|(name, vs)| SeriesEntry {
                name: name.clone(),
                kind: vs.series.kind(),
                file: series_file(name),
            })
            .collect(),
        metrics: results.metrics.keys().cloned().collect(),
        fulfillment: scores.clone(),
        skipped: skipped.clone(),
    };
    write_json(&ws.manifest_path(), &manifest)?;

    let tickets = update_tickets(ws, &spec, &all_series, &grid, &cfg.ticket, now)?;
    let ticket_board = load_ticket_board(ws)?;
    let reports = render_reports(
        ws,
        cfg,
        &all_series,
        &results.metrics,
        &ticket_board,
        now,
    )?;

    Ok(RunSummary {
        grid,
        sensors: data.len(),
        evaluated,
        skipped,
        fulfillment: scores,
        tickets,
        reports: reports.written,
        report_failures: reports.failed,
    })
}

/// Sensors that exist only as imported data enter validation as numeric.
pub fn data_catalog(ws: &Workspace, spec: &Specification) -> Vec<SensorMeta> {
    ws.list_raw_sensors()
        .into_iter()
        .filter(|id| spec.find_sensor(id).is_none())
        .map(|id| SensorMeta::numeric(&id))
        .collect()
}

/// Align every stored sensor onto one shared grid spanning all data.
fn preprocess(
    ws: &Workspace,
    spec: &Specification,
    catalog: &[SensorMeta],
    cfg: &RunConfig,
    grid_step: u64,
) -> Result<(TimeGrid, BTreeMap<String, TimeSeries>)> {
    let mut raws: BTreeMap<String, Vec<(Timestamp, f64)>> = BTreeMap::new();
    for id in ws.list_raw_sensors() {
        raws.insert(id.clone(), ws.load_raw(&id)?);
    }
    let mut span: Option<(Timestamp, Timestamp)> = None;
    for rows in raws.values() {
        let (Some(first), Some(last)) = (rows.first(), rows.last()) else { continue };
        span = Some(match span {
            None => (first.0, last.0),
            Some((lo, hi)) => (lo.min(first.0), hi.max(last.0)),
        });
    }
    let Some((lo, hi)) = span else {
        return Err(Failure::validation(
            "no sensor data in the workspace; run `nav import` first",
        ));
    };

    let step = grid_step as i64;
    let start_epoch = lo.epoch_seconds().div_euclid(step) * step;
    let last_epoch = hi.epoch_seconds().div_euclid(step) * step;
    let count = ((last_epoch - start_epoch) / step + 1) as usize;
    let start = Timestamp::from_epoch_seconds(start_epoch)
        .ok_or_else(|| Failure::validation("data timestamps out of representable range"))?;
    let grid =
        TimeGrid::new(start, grid_step, count).map_err(|e| Failure::validation(e.to_string()))?;

    let kind_of = |id: &str| -> SeriesKind {
        spec.find_sensor(id)
            .or_else(|| catalog.iter().find(|m| m.id == id))
            .map(|m| m.kind)
            .unwrap_or(SeriesKind::Numeric)
    };
    let t = &cfg.preprocess;
    let mut data = BTreeMap::new();
    for (id, raw) in &raws {
        let stage = |e: navlang::timeseries::TimeSeriesError| {
            Failure::validation(format!("preprocess `{id}`: {e}"))
        };
        let series = match kind_of(id) {
            SeriesKind::Logic => align_logic_to_grid(raw, grid, t.align_max_gap).map_err(stage)?,
            SeriesKind::Numeric => {
                let mut series = align_to_grid(raw, grid, t.align_max_gap).map_err(stage)?;
                if t.outlier_filter {
                    let pp = PreprocessConfig {
                        target_step: grid_step,
                        max_gap: t.align_max_gap.max(1),
                        outlier_window: t.outlier_window,
                        outlier_threshold: t.outlier_threshold,
                    };
                    series = detect_outliers(&series, &pp).map_err(stage)?.0;
                }
                if t.interpolate {
                    series = interpolate_gaps(&series, t.interpolate_max_gap).map_err(stage)?;
                }
                series
            }
        };
        data.insert(id.clone(), series);
    }
    Ok((grid, data))
}

/// The persistent ticket board; absent file means no tickets yet.
pub fn load_ticket_board(ws: &Workspace) -> Result<Vec<Ticket>> {
    let path = ws.tickets_path();
    if path.exists() { read_json(&path) } else { Ok(Vec::new()) }
}

/// Extract violations per rule, merge into the persistent board, write it.
///
/// Only rules that produced a series this run take part in the merge; a rule
/// that was skipped (no data) decided nothing, so its tickets pass through
/// untouched instead of being resolved.
pub fn update_tickets(
    ws: &Workspace,
    spec: &Specification,
    series: &BTreeMap<String, VirtualSensor>,
    grid: &TimeGrid,
    cfg: &TicketConfig,
    now: Timestamp,
) -> Result<TicketCounts> {
    let data: BTreeMap<String, TimeSeries> =
        series.iter().map(|(name, vs)| (name.clone(), vs.series.clone())).collect();
    let mut evaluated: BTreeSet<&str> = BTreeSet::new();
    let mut current = Vec::new();
    for rule in spec.rules() {
        let Some(vs) = series.get(&rule.name) else { continue };
        evaluated.insert(rule.name.as_str());
        let intervals = extract_violations(vs, cfg);
        current.extend(open_tickets(&intervals, &rule.context, &data, grid, cfg, now));
    }
    let previous = load_ticket_board(ws)?;
    let known: BTreeSet<&str> = previous.iter().map(|t| t.id.as_str()).collect();
    let decidable: Vec<Ticket> =
        previous.iter().filter(|t| evaluated.contains(t.rule.as_str())).cloned().collect();
    let mut merged = merge_tickets(&decidable, &current).into_iter();
    let mut board: Vec<Ticket> = previous
        .iter()
        .map(|t| {
            if evaluated.contains(t.rule.as_str()) {
                merged.next().expect("merge keeps one ticket per previous entry")
            } else {
                t.clone()
            }
        })
        .collect();
    board.extend(merged);
    let counts = TicketCounts {
        open: board.iter().filter(|t| t.status == TicketStatus::Open).count(),
        resolved: board.iter().filter(|t| t.status == TicketStatus::Resolved).count(),
        fresh: board.iter().filter(|t| !known.contains(t.id.as_str())).count(),
    };
    write_json(&ws.tickets_path(), &board)?;
    Ok(counts)
}

/// What `render_reports` produced: document names written, plus
/// `(name, reason)` for templates that could not be rendered — typically a
/// section bound to a series or metric the last run did not produce.
#[derive(Default)]
pub struct RenderedReports {
    pub written: Vec<String>,
    pub failed: Vec<(String, String)>,
}

/// Render the selected templates. A failed template never aborts the others.
pub fn render_reports(
    ws: &Workspace,
    cfg: &RunConfig,
    series: &BTreeMap<String, VirtualSensor>,
    metrics: &BTreeMap<String, MetricResult>,
    tickets: &[Ticket],
    now: Timestamp,
) -> Result<RenderedReports> {
    let stored = load_templates(ws)?;
    let selected: Vec<(String, ReportTemplate)> = if cfg.templates.is_empty() {
        stored.into_iter().collect()
    } else {
        let available: Vec<&String> = stored.keys().collect();
        let mut picked = Vec::new();
        for name in &cfg.templates {
            match stored.get(name) {
                Some(t) => picked.push((name.clone(), t.clone())),
                None => {
                    return Err(Failure::validation(format!(
                        "report template `{name}` not found; available: {}",
                        if available.is_empty() {
                            "none".to_string()
                        } else {
                            available
                                .iter()
                                .map(|s| s.as_str())
                                .collect::<Vec<_>>()
                                .join(", ")
                        }
                    )));
                }
            }
        }
        picked
    };
    if selected.is_empty() {
        return Ok(RenderedReports::default());
    }
    let comments: CommentStore = if ws.comments_path().exists() {
        read_json(&ws.comments_path())?
    } else {
        CommentStore::new()
    };
    let inputs = ReportInputs { series, metrics, tickets };
    let mut out = RenderedReports::default();
    for (name, template) in selected {
        let doc = match render_report(&template, &inputs, &comments, now) {
            Ok(doc) => doc,
            Err(e) => {
                out.failed.push((name, e.to_string()));
                continue;
            }
        };
        let html_path = ws.reports_dir().join(format!("{name}.html"));
        fs::write(&html_path, doc.to_html())
            .map_err(|e| Failure::io(format!("cannot write {}: {e}", html_path.display())))?;
        write_json(&ws.reports_dir().join(format!("{name}.json")), &doc)?;
        out.written.push(name);
    }
    Ok(out)
}

/// Templates stored as `reports/templates/<name>.json`.
fn load_templates(ws: &Workspace) -> Result<BTreeMap<String, ReportTemplate>> {
    let dir = ws.templates_dir();
    let mut out = BTreeMap::new();
    let Ok(entries) = fs::read_dir(&dir) else { return Ok(out) };
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    for path in paths {
        let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        out.insert(name, read_json(&path)?);
    }
    Ok(out)
}

/// Everything a previous `nav eval` left under `results/`.
pub struct LoadedResults {
    pub manifest: Manifest,
    pub series: BTreeMap<String, VirtualSensor>,
    pub metrics: BTreeMap<String, MetricResult>,
}

pub fn load_results(ws: &Workspace) -> Result<LoadedResults> {
    let path = ws.manifest_path();
    if !path.exists() {
        return Err(Failure::io(format!(
            "no stored results ({} missing); run `nav eval` first",
            path.display()
        )));
    }
    let manifest: Manifest = read_json(&path)?;
    let mut series = BTreeMap::new();
    for entry in &manifest.series {
        let vs: VirtualSensor = read_json(&ws.series_dir().join(&entry.file))?;
        series.insert(entry.name.clone(), vs);
    }
    let mut metrics = BTreeMap::new();
    for name in &manifest.metrics {
        let m: MetricResult = read_json(&ws.metrics_dir().join(format!("{name}.json")))?;
        metrics.insert(name.clone(), m);
    }
    Ok(LoadedResults { manifest, series, metrics })
}
