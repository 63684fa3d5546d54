//! Monthly-report building blocks: plot data extraction, section templates,
//! persistent comments, and deterministic HTML/JSON rendering.
//!
//! A report is described once as a [`ReportTemplate`] and regenerated every
//! period against fresh evaluation results. Comments live in a
//! [`CommentStore`] keyed by section id, so they survive regeneration
//! untouched.

pub mod plot;
pub mod render;
pub mod template;

pub use plot::{build_plot_data, carpet_plot, line_plot, scatter_plot, PlotData, PlotError, PlotKind};
pub use render::{
    render_report, RenderedSection, ReportDocument, ReportError, ReportInputs, SectionContent,
};
pub use template::{Comment, CommentStore, ReportTemplate, Section, SectionBinding};
