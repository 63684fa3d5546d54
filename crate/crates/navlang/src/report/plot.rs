//! Plot data extraction: structured arrays ready for any chart frontend.
//!
//! No pixels are produced here. A line plot is (timestamp, sample) pairs, a
//! scatter plot is present-value pairs of two series, and a carpet plot is a
//! day-by-time-of-day matrix. Logic series are plotted as 1/0 with their
//! absent states preserved.

use serde::{Deserialize, Serialize};

use crate::timeseries::{LogicSample, NumericSample, TimeSeries, Timestamp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlotKind {
    Line,
    Scatter,
    Carpet,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PlotData {
    Line {
        series: String,
        points: Vec<(Timestamp, NumericSample)>,
    },
    Scatter {
        x_series: String,
        y_series: String,
        /// Only timestamps where both samples were present.
        points: Vec<(f64, f64)>,
    },
    Carpet {
        series: String,
        /// Midnight of the first row's day.
        first_day: Timestamp,
        /// Time-of-day slots per row: 86400 / grid step.
        columns: usize,
        /// One row per calendar day spanned; cells off the grid are missing.
        rows: Vec<Vec<NumericSample>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PlotError {
    #[error("{kind:?} plot needs {expected} series, got {got}")]
    WrongInputCount { kind: PlotKind, expected: usize, got: usize },
    #[error("scatter inputs `{x}` and `{y}` are on different grids")]
    GridMismatch { x: String, y: String },
    #[error("carpet plot needs a step that divides a day, got {step}s")]
    BadCarpetStep { step: u64 },
}

/// View any series as numeric samples; logic becomes 1/0.
fn numeric_view(series: &TimeSeries) -> Vec<NumericSample> {
    match series.numeric_samples() {
        Some(v) => v.to_vec(),
        None => series
            .logic_samples()
            .expect("series is numeric or logic")
            .iter()
            .map(|s| match s {
                LogicSample::True => NumericSample::Value(1.0),
                LogicSample::False => NumericSample::Value(0.0),
                LogicSample::Missing => NumericSample::Missing,
                LogicSample::Undefined => NumericSample::Undefined,
            })
            .collect(),
    }
}

pub fn line_plot(name: &str, series: &TimeSeries) -> PlotData {
    let points = series.grid().timestamps().zip(numeric_view(series)).collect();
    PlotData::Line { series: name.to_string(), points }
}

pub fn scatter_plot(
    x_name: &str,
    x: &TimeSeries,
    y_name: &str,
    y: &TimeSeries,
) -> Result<PlotData, PlotError> {
    if x.grid() != y.grid() {
        return Err(PlotError::GridMismatch { x: x_name.to_string(), y: y_name.to_string() });
    }
    let points = numeric_view(x)
        .into_iter()
        .zip(numeric_view(y))
        .filter_map(|(a, b)| Some((a.value()?, b.value()?)))
        .collect();
    Ok(PlotData::Scatter {
        x_series: x_name.to_string(),
        y_series: y_name.to_string(),
        points,
    })
}

pub fn carpet_plot(name: &str, series: &TimeSeries) -> Result<PlotData, PlotError> {
    let grid = series.grid();
    let step = grid.step_secs();
    if step == 0 || 86_400 % step != 0 {
        return Err(PlotError::BadCarpetStep { step });
    }
    let columns = (86_400 / step) as usize;
    let samples = numeric_view(series);
    let first_day = grid.start().start_of_day();
    let mut rows = Vec::new();
    if let Some(last) = grid.last() {
        let last_day = last.start_of_day();
        let mut day = first_day;
        while day <= last_day {
            let row: Vec<NumericSample> = (0..columns)
                .map(|j| {
                    let t = day.plus_seconds(j as i64 * step as i64);
                    match grid.index_of(t) {
                        Some(k) => samples[k],
                        None => NumericSample::Missing,
                    }
                })
                .collect();
            rows.push(row);
            day = day.plus_seconds(86_400);
        }
    }
    Ok(PlotData::Carpet { series: name.to_string(), first_day, columns, rows })
}

/// Uniform entry point: line and carpet take one named series, scatter two.
pub fn build_plot_data(
    kind: PlotKind,
    inputs: &[(&str, &TimeSeries)],
) -> Result<PlotData, PlotError> {
    let expect = |n: usize| {
        if inputs.len() == n {
            Ok(())
        } else {
            Err(PlotError::WrongInputCount { kind, expected: n, got: inputs.len() })
        }
    };
    match kind {
        PlotKind::Line => {
            expect(1)?;
            Ok(line_plot(inputs[0].0, inputs[0].1))
        }
        PlotKind::Scatter => {
            expect(2)?;
            scatter_plot(inputs[0].0, inputs[0].1, inputs[1].0, inputs[1].1)
        }
        PlotKind::Carpet => {
            expect(1)?;
            carpet_plot(inputs[0].0, inputs[0].1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timeseries::TimeGrid;

    fn ts(text: &str) -> Timestamp {
        Timestamp::parse(text).unwrap()
    }

    fn numeric(start: &str, step: u64, values: &[f64]) -> TimeSeries {
        let grid = TimeGrid::new(ts(start), step, values.len()).unwrap();
        TimeSeries::numeric(grid, values.iter().map(|&v| NumericSample::Value(v)).collect())
            .unwrap()
    }

    #[test]
    fn line_plot_pairs_timestamps_with_samples() {
        let s = numeric("2010-05-01T00:00:00", 900, &[0.352, 0.35, 0.346, 0.343, 0.339]);
        let PlotData::Line { series, points } = line_plot("f", &s) else { panic!() };
        assert_eq!(series, "f");
        assert_eq!(points.len(), 5);
        assert_eq!(points[0], (ts("2010-05-01T00:00:00"), NumericSample::Value(0.352)));
        assert_eq!(points[4].0, ts("2010-05-01T01:00:00"));
    }

    #[test]
    fn scatter_drops_absent_pairs() {
        let grid = TimeGrid::new(ts("2010-05-01T00:00:00"), 900, 4).unwrap();
        let x = TimeSeries::numeric(
            grid,
            vec![
                NumericSample::Value(1.0),
                NumericSample::Value(2.0),
                NumericSample::Missing,
                NumericSample::Value(4.0),
            ],
        )
        .unwrap();
        let y = TimeSeries::numeric(
            grid,
            vec![
                NumericSample::Value(10.0),
                NumericSample::Undefined,
                NumericSample::Value(30.0),
                NumericSample::Value(40.0),
            ],
        )
        .unwrap();
        let PlotData::Scatter { points, .. } = scatter_plot("x", &x, "y", &y).unwrap() else {
            panic!()
        };
        assert_eq!(points, vec![(1.0, 10.0), (4.0, 40.0)]);
    }

    #[test]
    fn scatter_requires_one_grid() {
        let x = numeric("2010-05-01T00:00:00", 900, &[1.0]);
        let y = numeric("2010-05-01T00:15:00", 900, &[1.0]);
        assert_eq!(
            scatter_plot("x", &x, "y", &y).unwrap_err(),
            PlotError::GridMismatch { x: "x".into(), y: "y".into() }
        );
    }

    #[test]
    fn carpet_of_two_days_is_2_by_96() {
        let values: Vec<f64> = (0..192).map(|i| i as f64).collect();
        let s = numeric("2010-05-01T00:00:00", 900, &values);
        let PlotData::Carpet { first_day, columns, rows, .. } =
            carpet_plot("s", &s).unwrap()
        else {
            panic!()
        };
        assert_eq!(first_day, ts("2010-05-01T00:00:00"));
        assert_eq!(columns, 96);
        assert_eq!(rows.len(), 2);
        // Flattened row-major equals the original sample order.
        let flat: Vec<NumericSample> = rows.into_iter().flatten().collect();
        assert_eq!(flat, s.numeric_samples().unwrap());
    }

    #[test]
    fn carpet_pads_partial_days_with_missing() {
        // Six hourly samples starting at 22:00: spans two calendar days.
        let s = numeric("2010-05-01T22:00:00", 3600, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let PlotData::Carpet { columns, rows, .. } = carpet_plot("s", &s).unwrap() else {
            panic!()
        };
        assert_eq!(columns, 24);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0][21], NumericSample::Missing);
        assert_eq!(rows[0][22], NumericSample::Value(1.0));
        assert_eq!(rows[1][0], NumericSample::Value(3.0));
        assert_eq!(rows[1][4], NumericSample::Missing);
    }

    #[test]
    fn carpet_rejects_steps_that_do_not_tile_a_day() {
        let s = numeric("2010-05-01T00:00:00", 7000, &[1.0]);
        assert_eq!(carpet_plot("s", &s).unwrap_err(), PlotError::BadCarpetStep { step: 7000 });
    }

    #[test]
    fn logic_series_plot_as_unit_values() {
        let grid = TimeGrid::new(ts("2010-05-01T00:00:00"), 900, 4).unwrap();
        let s = TimeSeries::logic(
            grid,
            vec![
                LogicSample::True,
                LogicSample::False,
                LogicSample::Missing,
                LogicSample::Undefined,
            ],
        )
        .unwrap();
        let PlotData::Line { points, .. } = line_plot("r", &s) else { panic!() };
        let values: Vec<NumericSample> = points.into_iter().map(|(_, v)| v).collect();
        assert_eq!(
            values,
            vec![
                NumericSample::Value(1.0),
                NumericSample::Value(0.0),
                NumericSample::Missing,
                NumericSample::Undefined,
            ]
        );
    }

    #[test]
    fn unified_entry_checks_arity() {
        let s = numeric("2010-05-01T00:00:00", 900, &[1.0]);
        let err = build_plot_data(PlotKind::Scatter, &[("s", &s)]).unwrap_err();
        assert_eq!(
            err,
            PlotError::WrongInputCount { kind: PlotKind::Scatter, expected: 2, got: 1 }
        );
        assert!(build_plot_data(PlotKind::Line, &[("s", &s)]).is_ok());
        assert!(build_plot_data(PlotKind::Carpet, &[("s", &s)]).is_ok());
    }
}
