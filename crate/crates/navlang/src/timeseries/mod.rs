//! Equidistant quad-state time series and the preprocessing stage.
//!
//! A [`TimeSeries`] is the universal value carrier: an equidistant sequence of
//! numeric or logic samples on a [`TimeGrid`]. Raw sensor readings enter
//! through [`align_to_grid`], gaps are closed with [`interpolate_gaps`] and
//! implausible readings are dropped by [`detect_outliers`]. All types are
//! immutable values and every operation is a pure function.

mod preprocess;
mod sample;
mod series;
mod time;

pub use preprocess::{
    align_logic_to_grid, align_to_grid, detect_outliers, interpolate_gaps, PreprocessConfig,
};
pub use sample::{LogicSample, NumericSample};
pub use series::{SensorMeta, SeriesKind, SeriesValues, TimeSeries};
pub use time::{TimeGrid, Timestamp};

use thiserror::Error;

/// Errors raised by time-series construction and preprocessing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TimeSeriesError {
    #[error("grid step must be positive")]
    ZeroStep,
    #[error("timestamp '{0}' is not a valid `YYYY-MM-DDTHH:MM:SS` date-time")]
    BadTimestamp(String),
    #[error("raw input is not strictly sorted: {1} at row {0} does not follow its predecessor")]
    UnsortedInput(usize, Timestamp),
    #[error("duplicate raw timestamp {1} at row {0}")]
    DuplicateTimestamp(usize, Timestamp),
    #[error("expected a {expected} series, got a {found} series")]
    KindMismatch { expected: SeriesKind, found: SeriesKind },
    #[error("sample count {samples} does not match grid count {grid}")]
    LengthMismatch { samples: usize, grid: usize },
    #[error("invalid preprocessing configuration: {0}")]
    InvalidConfig(String),
}
