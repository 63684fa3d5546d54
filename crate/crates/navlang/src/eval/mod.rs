//! Evaluation of specifications over aligned sensor data.
//!
//! The semantic core is four-valued: beyond true/false (or a number), every
//! sample can be *missing* — we never got the data — or *undefined* — we
//! tried to compute it and could not. The two travel differently: undefined
//! outranks missing through arithmetic and connectives, decided operands
//! can still win outright (`false AND undefined` is `false`), and time
//! routines are always decided because a schedule needs no measurements.
//!
//! Submodules:
//! - [`logic`] / [`arith`]: the pointwise operator tables,
//! - [`routine`]: calendar schedules,
//! - [`envelope`]: piecewise-linear operating envelopes,
//! - [`metric`]: calendar-bucketed aggregation,
//! - [`fulfillment`]: how often a rule held while it was decidable,
//! - [`engine`]: the memoizing columnar evaluator tying it together.

pub mod arith;
pub mod engine;
pub mod envelope;
pub mod fulfillment;
pub mod logic;
pub mod metric;
pub mod routine;

pub use engine::{
    evaluate_all, evaluate_tolerant, EvalOptions, EvalResults, Evaluator, VirtualSensor,
};
pub use envelope::Envelope;
pub use fulfillment::{fulfillment, fulfillment_within, FulfillmentScore};
pub use metric::{eval_metric, MetricBucket, MetricResult};
pub use routine::{eval_time_routine, routine_matches};

use crate::timeseries::SeriesKind;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("unknown reference `{0}`")]
    UnknownReference(String),
    #[error("no data for sensor `{0}`")]
    MissingData(String),
    #[error("metric `{0}` cannot be referenced in an expression")]
    MetricReference(String),
    #[error("series for `{0}` is not on the evaluation grid")]
    GridMismatch(String),
    #[error("reference cycle: {0}")]
    Cycle(String),
    #[error("type error in `{artifact}`: expected a {expected} operand")]
    ExpectedKind { artifact: String, expected: SeriesKind },
    #[error("`{name}` is {found}, expected {expected}")]
    WrongKind { name: String, expected: SeriesKind, found: SeriesKind },
    #[error("unsupported aggregate `{0}`")]
    UnknownAggregate(String),
}
