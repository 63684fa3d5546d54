//! Constraint language and evaluation engine for building-operation monitoring.
//!
//! The crate covers the full pipeline from raw sensor readings to actionable
//! output: equidistant quad-state time series with preprocessing
//! ([`timeseries`]), a textual specification language for rules, functions,
//! metrics, time routines and characteristics ([`lang`]), a four-valued bulk
//! evaluator that materializes a virtual sensor per artifact and
//! sub-expression ([`eval`]), violation tickets ([`tickets`]) and report
//! assembly with persistent comments ([`report`]).

pub mod eval;
pub mod lang;
pub mod report;
pub mod tickets;
pub mod timeseries;

pub use eval::{evaluate_all, EvalError, EvalOptions, EvalResults, Evaluator, VirtualSensor};
pub use report::{render_report, CommentStore, ReportDocument, ReportTemplate};
pub use tickets::{extract_violations, merge_tickets, open_tickets, Ticket, TicketConfig};
pub use lang::{format_spec, parse_spec, validate_spec, Diagnostic, Diagnostics, Severity, Specification};
pub use timeseries::{LogicSample, NumericSample, SensorMeta, SeriesKind, TimeGrid, TimeSeries, Timestamp};
