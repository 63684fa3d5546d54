use std::fmt;

use serde::{Deserialize, Serialize};

use super::{LogicSample, NumericSample, TimeGrid, TimeSeriesError, Timestamp};

/// Value kind of a series or sensor.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Numeric,
    Logic,
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesKind::Numeric => "numeric",
            SeriesKind::Logic => "logic",
        })
    }
}

/// The sample storage of a series, one vector per kind.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesValues {
    Numeric(Vec<NumericSample>),
    Logic(Vec<LogicSample>),
}

impl SeriesValues {
    pub fn len(&self) -> usize {
        match self {
            SeriesValues::Numeric(v) => v.len(),
            SeriesValues::Logic(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> SeriesKind {
        match self {
            SeriesValues::Numeric(_) => SeriesKind::Numeric,
            SeriesValues::Logic(_) => SeriesKind::Logic,
        }
    }
}

/// Equidistant sequence of quad-state samples on a [`TimeGrid`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries", into = "RawSeries")]
pub struct TimeSeries {
    grid: TimeGrid,
    values: SeriesValues,
}

/// Serialization shape of [`TimeSeries`]; deserializing re-checks that the
/// sample count matches the grid.
#[derive(Serialize, Deserialize)]
struct RawSeries {
    grid: TimeGrid,
    values: SeriesValues,
}

impl TryFrom<RawSeries> for TimeSeries {
    type Error = TimeSeriesError;

    fn try_from(raw: RawSeries) -> Result<Self, Self::Error> {
        TimeSeries::new(raw.grid, raw.values)
    }
}

impl From<TimeSeries> for RawSeries {
    fn from(s: TimeSeries) -> Self {
        RawSeries { grid: s.grid, values: s.values }
    }
}

impl TimeSeries {
    pub fn new(grid: TimeGrid, values: SeriesValues) -> Result<Self, TimeSeriesError> {
        if values.len() != grid.count() {
            return Err(TimeSeriesError::LengthMismatch {
                samples: values.len(),
                grid: grid.count(),
            });
        }
        Ok(TimeSeries { grid, values })
    }

    pub fn numeric(grid: TimeGrid, samples: Vec<NumericSample>) -> Result<Self, TimeSeriesError> {
        TimeSeries::new(grid, SeriesValues::Numeric(samples))
    }

    pub fn logic(grid: TimeGrid, samples: Vec<LogicSample>) -> Result<Self, TimeSeriesError> {
        TimeSeries::new(grid, SeriesValues::Logic(samples))
    }

    /// A numeric series with every sample missing.
    pub fn all_missing(grid: TimeGrid) -> Self {
        TimeSeries {
            grid,
            values: SeriesValues::Numeric(vec![NumericSample::Missing; grid.count()]),
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn kind(&self) -> SeriesKind {
        self.values.kind()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &SeriesValues {
        &self.values
    }

    pub fn into_values(self) -> SeriesValues {
        self.values
    }

    pub fn numeric_samples(&self) -> Option<&[NumericSample]> {
        match &self.values {
            SeriesValues::Numeric(v) => Some(v),
            SeriesValues::Logic(_) => None,
        }
    }

    pub fn logic_samples(&self) -> Option<&[LogicSample]> {
        match &self.values {
            SeriesValues::Logic(v) => Some(v),
            SeriesValues::Numeric(_) => None,
        }
    }

    /// Is the sample at index `k` present (a value or definite truth)?
    pub fn is_present(&self, k: usize) -> bool {
        match &self.values {
            SeriesValues::Numeric(v) => v[k].is_present(),
            SeriesValues::Logic(v) => v[k].is_present(),
        }
    }

    /// Is the sample at index `k` missing?
    pub fn is_missing(&self, k: usize) -> bool {
        match &self.values {
            SeriesValues::Numeric(v) => v[k].is_missing(),
            SeriesValues::Logic(v) => v[k].is_missing(),
        }
    }

    /// Sample at index `k` rendered canonically (`true`, `21.5`, `missing`, ...).
    pub fn sample_text(&self, k: usize) -> String {
        match &self.values {
            SeriesValues::Numeric(v) => v[k].to_string(),
            SeriesValues::Logic(v) => v[k].to_string(),
        }
    }

    /// Fraction of present samples; 1.0 for an empty grid.
    pub fn coverage(&self) -> f64 {
        if self.is_empty() {
            return 1.0;
        }
        let present = (0..self.len()).filter(|&k| self.is_present(k)).count();
        present as f64 / self.len() as f64
    }

    pub fn iter_timestamps(&self) -> impl Iterator<Item = Timestamp> + '_ {
        self.grid.timestamps()
    }
}

/// Descriptive metadata of a real sensor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SensorMeta {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub kind: SeriesKind,
}

impl SensorMeta {
    pub fn numeric(id: &str) -> Self {
        SensorMeta { id: id.to_string(), label: None, unit: None, kind: SeriesKind::Numeric }
    }

    pub fn logic(id: &str) -> Self {
        SensorMeta { id: id.to_string(), label: None, unit: None, kind: SeriesKind::Logic }
    }
}
