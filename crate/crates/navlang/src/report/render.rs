//! Report assembly and rendering.
//!
//! Rendering is a pure function of (template, inputs, comments, generation
//! timestamp): run it twice with the same arguments and the bytes match.
//! The document carries its content twice — a self-contained HTML page with
//! plot data embedded as JSON blobs, and a machine-readable JSON form of
//! the whole document.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::eval::{fulfillment, FulfillmentScore, MetricResult, VirtualSensor};
use crate::tickets::Ticket;
use crate::timeseries::Timestamp;

use super::plot::{build_plot_data, PlotData, PlotError};
use super::template::{Comment, CommentStore, ReportTemplate, SectionBinding};

use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("duplicate section id `{0}`")]
    DuplicateSection(String),
    #[error("section `{section}`: unknown series `{name}`")]
    UnknownSeries { section: String, name: String },
    #[error("section `{section}`: unknown metric `{name}`")]
    UnknownMetric { section: String, name: String },
    #[error("section `{section}`: `{name}` is not a logic series")]
    NotLogic { section: String, name: String },
    #[error("section `{section}`: {source}")]
    Plot {
        section: String,
        #[source]
        source: PlotError,
    },
}

/// Evaluation outputs a report draws from. `series` is typically the run's
/// virtual sensors, optionally joined by preprocessed sensor series.
pub struct ReportInputs<'a> {
    pub series: &'a BTreeMap<String, VirtualSensor>,
    pub metrics: &'a BTreeMap<String, MetricResult>,
    pub tickets: &'a [Ticket],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SectionContent {
    Plot { plot: PlotData },
    Metrics { metrics: Vec<MetricResult> },
    Tickets { tickets: Vec<Ticket> },
    Fulfillment { scores: Vec<FulfillmentScore> },
    Text { body: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderedSection {
    pub id: String,
    pub title: String,
    pub content: SectionContent,
    pub comments: Vec<Comment>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub title: String,
    pub generated_at: Timestamp,
    /// First and last grid timestamp across all input series.
    pub span: Option<(Timestamp, Timestamp)>,
    pub sections: Vec<RenderedSection>,
}

pub fn render_report(
    tmpl: &ReportTemplate,
    inputs: &ReportInputs,
    comments: &CommentStore,
    generated_at: Timestamp,
) -> Result<ReportDocument, ReportError> {
    let mut seen = BTreeSet::new();
    for section in &tmpl.sections {
        if !seen.insert(section.id.as_str()) {
            return Err(ReportError::DuplicateSection(section.id.clone()));
        }
    }
    let sections = tmpl
        .sections
        .iter()
        .map(|section| {
            Ok(RenderedSection {
                id: section.id.clone(),
                title: section.title.clone(),
                content: render_content(&section.id, &section.binding, inputs)?,
                comments: comments.comments_for(&section.id).to_vec(),
            })
        })
        .collect::<Result<Vec<_>, ReportError>>()?;
    Ok(ReportDocument {
        title: tmpl.title.clone(),
        generated_at,
        span: data_span(inputs),
        sections,
    })
}

fn data_span(inputs: &ReportInputs) -> Option<(Timestamp, Timestamp)> {
    let mut span: Option<(Timestamp, Timestamp)> = None;
    for vs in inputs.series.values() {
        let grid = vs.series.grid();
        let Some(last) = grid.last() else { continue };
        span = Some(match span {
            None => (grid.start(), last),
            Some((lo, hi)) => (lo.min(grid.start()), hi.max(last)),
        });
    }
    span
}

fn render_content(
    section: &str,
    binding: &SectionBinding,
    inputs: &ReportInputs,
) -> Result<SectionContent, ReportError> {
    match binding {
        SectionBinding::Plot { kind, series } => {
            let mut resolved: Vec<(&str, &crate::timeseries::TimeSeries)> = Vec::new();
            for name in series {
                let vs = inputs.series.get(name).ok_or_else(|| ReportError::UnknownSeries {
                    section: section.to_string(),
                    name: name.clone(),
                })?;
                resolved.push((name, &vs.series));
            }
            let plot = build_plot_data(*kind, &resolved)
                .map_err(|source| ReportError::Plot { section: section.to_string(), source })?;
            Ok(SectionContent::Plot { plot })
        }
        SectionBinding::MetricTable { metrics } => {
            let list: Vec<MetricResult> = if metrics.is_empty() {
                inputs.metrics.values().cloned().collect()
            } else {
                metrics
                    .iter()
                    .map(|name| {
                        inputs.metrics.get(name).cloned().ok_or_else(|| {
                            ReportError::UnknownMetric {
                                section: section.to_string(),
                                name: name.clone(),
                            }
                        })
                    })
                    .collect::<Result<_, _>>()?
            };
            Ok(SectionContent::Metrics { metrics: list })
        }
        SectionBinding::TicketSummary => {
            Ok(SectionContent::Tickets { tickets: inputs.tickets.to_vec() })
        }
        SectionBinding::FulfillmentTable { rules } => {
            let scores: Vec<FulfillmentScore> = if rules.is_empty() {
                // Top-level logic artifacts only; positional sub-expression
                // names contain '/'.
                inputs
                    .series
                    .iter()
                    .filter(|(name, vs)| {
                        !name.contains('/') && vs.series.logic_samples().is_some()
                    })
                    .map(|(name, vs)| fulfillment(name, vs.series.logic_samples().unwrap()))
                    .collect()
            } else {
                rules
                    .iter()
                    .map(|name| {
                        let vs = inputs.series.get(name).ok_or_else(|| {
                            ReportError::UnknownSeries {
                                section: section.to_string(),
                                name: name.clone(),
                            }
                        })?;
                        let samples =
                            vs.series.logic_samples().ok_or_else(|| ReportError::NotLogic {
                                section: section.to_string(),
                                name: name.clone(),
                            })?;
                        Ok(fulfillment(name, samples))
                    })
                    .collect::<Result<_, ReportError>>()?
            };
            Ok(SectionContent::Fulfillment { scores })
        }
        SectionBinding::Text { body } => Ok(SectionContent::Text { body: body.clone() }),
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    out
}

/// JSON for embedding in a `<script>` element: `<` never appears outside
/// string values in JSON, so escaping it globally keeps `</script>` safe.
fn script_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report content serializes").replace('<', "\\u003c")
}

impl ReportDocument {
    /// Machine-readable form; identical inputs give identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    /// Self-contained page; identical inputs give identical bytes.
    pub fn to_html(&self) -> String {
        let mut h = String::new();
        let _ = write!(
            h,
            "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>{}</title>\n",
            escape(&self.title)
        );
        h.push_str(
            "<style>\nbody{font-family:sans-serif;margin:2rem auto;max-width:60rem}\n\
             table{border-collapse:collapse}\ntd,th{border:1px solid #999;padding:.25rem .5rem}\n\
             .comment{background:#fffbe6;padding:.5rem;margin:.25rem 0}\n\
             .meta{color:#555}\n</style>\n</head>\n<body>\n",
        );
        let _ = writeln!(h, "<h1>{}</h1>", escape(&self.title));
        match self.span {
            Some((lo, hi)) => {
                let _ = writeln!(
                    h,
                    "<p class=\"meta\">Generated {} &middot; Data {} &ndash; {}</p>",
                    self.generated_at, lo, hi
                );
            }
            None => {
                let _ = writeln!(h, "<p class=\"meta\">Generated {}</p>", self.generated_at);
            }
        }
        for section in &self.sections {
            let _ = writeln!(h, "<section id=\"{}\">", escape(&section.id));
            let _ = writeln!(h, "<h2>{}</h2>", escape(&section.title));
            section.content.write_html(&mut h);
            if !section.comments.is_empty() {
                h.push_str("<div class=\"comments\">\n");
                for c in &section.comments {
                    let _ = writeln!(
                        h,
                        "<p class=\"comment\"><strong>{}</strong> <time>{}</time>: {}</p>",
                        escape(&c.author),
                        c.timestamp,
                        escape(&c.text)
                    );
                }
                h.push_str("</div>\n");
            }
            h.push_str("</section>\n");
        }
        h.push_str("</body>\n</html>\n");
        h
    }
}

impl SectionContent {
    fn write_html(&self, h: &mut String) {
        match self {
            SectionContent::Plot { plot } => {
                let class = match plot {
                    PlotData::Line { .. } => "line",
                    PlotData::Scatter { .. } => "scatter",
                    PlotData::Carpet { .. } => "carpet",
                };
                let _ = writeln!(
                    h,
                    "<figure class=\"plot plot-{class}\">\n<script type=\"application/json\">{}</script>\n</figure>",
                    script_json(plot)
                );
            }
            SectionContent::Metrics { metrics } => {
                for m in metrics {
                    let _ = writeln!(
                        h,
                        "<h3>{} <small>{:?}</small></h3>",
                        escape(&m.name),
                        m.filter
                    );
                    h.push_str(
                        "<table>\n<tr><th>Bucket</th><th>Value</th><th>Coverage</th></tr>\n",
                    );
                    for b in &m.buckets {
                        let _ = writeln!(
                            h,
                            "<tr><td>{}</td><td>{}</td><td>{:.1}%</td></tr>",
                            b.start,
                            b.value,
                            b.coverage * 100.0
                        );
                    }
                    h.push_str("</table>\n");
                }
            }
            SectionContent::Tickets { tickets } => {
                if tickets.is_empty() {
                    h.push_str("<p>No tickets.</p>\n");
                } else {
                    h.push_str(
                        "<table>\n<tr><th>Ticket</th><th>Rule</th><th>From</th><th>To</th>\
                         <th>Samples</th><th>Status</th></tr>\n",
                    );
                    for t in tickets {
                        let _ = writeln!(
                            h,
                            "<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{:?}</td></tr>",
                            escape(&t.id),
                            escape(&t.rule),
                            t.interval.start,
                            t.interval.end,
                            t.interval.sample_count,
                            t.status
                        );
                    }
                    h.push_str("</table>\n");
                }
            }
            SectionContent::Fulfillment { scores } => {
                h.push_str(
                    "<table>\n<tr><th>Rule</th><th>Fulfillment</th><th>True</th><th>False</th>\
                     <th>Missing</th><th>Undefined</th></tr>\n",
                );
                for s in scores {
                    let ratio = match s.ratio {
                        Some(r) => format!("{:.1}%", r * 100.0),
                        None => "&mdash;".to_string(),
                    };
                    let _ = writeln!(
                        h,
                        "<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td></tr>",
                        escape(&s.name),
                        ratio,
                        s.true_count,
                        s.false_count,
                        s.missing_count,
                        s.undefined_count
                    );
                }
                h.push_str("</table>\n");
            }
            SectionContent::Text { body } => {
                let _ = writeln!(h, "<p>{}</p>", escape(body));
            }
        }
    }
}
