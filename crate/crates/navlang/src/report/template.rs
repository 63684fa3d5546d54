//! Report templates and the independent comment store.
//!
//! A template is an ordered list of sections, each with a *stable* id and a
//! content binding. Comments are keyed by that id, not by document position,
//! and live in their own store with their own lifetime — regenerating a
//! report with new data must never touch them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::timeseries::Timestamp;

use super::plot::PlotKind;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SectionBinding {
    /// One series for line/carpet, two (x, y) for scatter.
    Plot { kind: PlotKind, series: Vec<String> },
    /// Named metrics; empty means every metric of the run.
    MetricTable { metrics: Vec<String> },
    /// All tickets passed to the renderer.
    TicketSummary,
    /// Fulfillment ratios for the named rules; empty means every top-level
    /// logic artifact (sub-expression series are skipped).
    FulfillmentTable { rules: Vec<String> },
    /// Fixed prose from the template author.
    Text { body: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    /// Stable across regenerations; comments attach to this.
    pub id: String,
    pub title: String,
    pub binding: SectionBinding,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportTemplate {
    pub title: String,
    pub sections: Vec<Section>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comment {
    pub author: String,
    pub timestamp: Timestamp,
    pub text: String,
}

/// Handwritten comments, keyed by section id. Attachment order per section
/// is preserved; the store accepts comments for ids no current template
/// knows — they simply wait for a template that renders them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommentStore {
    comments: BTreeMap<String, Vec<Comment>>,
}

impl CommentStore {
    pub fn new() -> Self {
        CommentStore::default()
    }

    pub fn attach(&mut self, section_id: &str, author: &str, timestamp: Timestamp, text: &str) {
        self.comments.entry(section_id.to_string()).or_default().push(Comment {
            author: author.to_string(),
            timestamp,
            text: text.to_string(),
        });
    }

    pub fn comments_for(&self, section_id: &str) -> &[Comment] {
        self.comments.get(section_id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn sections(&self) -> impl Iterator<Item = &str> {
        self.comments.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.comments.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.comments.values().all(Vec::is_empty)
    }
}
