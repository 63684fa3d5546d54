//! Calendar pattern evaluation for time routines.
//!
//! A routine's own fields decide base membership from the timestamp alone;
//! included routines extend it and excluded routines always win. The result
//! is decided at every grid position — a schedule has no absent states.

use crate::lang::{RoutineFields, TimeRoutineDef};
use crate::timeseries::{LogicSample, TimeGrid, TimeSeries, Timestamp};

/// Does the timestamp satisfy every calendar field pattern?
pub fn routine_matches(fields: &RoutineFields, t: Timestamp) -> bool {
    fields.year.matches(t.year().max(0) as u32)
        && fields.month.matches(t.month())
        && fields.day.matches(t.day())
        && fields.dayofweek.matches(t.weekday())
        && fields.hour.matches(t.hour())
        && fields.minute.matches(t.minute())
        && fields.second.matches(t.second())
}

/// Effective schedule over a grid: `(base OR any include) AND NOT any
/// exclude`. Include/exclude series are read as "is true"; their absent
/// states count as inactive, so the output is always decided.
///
/// Each include/exclude slice must cover the whole grid.
pub fn eval_time_routine(
    def: &TimeRoutineDef,
    grid: TimeGrid,
    includes: &[&[LogicSample]],
    excludes: &[&[LogicSample]],
) -> TimeSeries {
    let samples: Vec<LogicSample> = (0..grid.count())
        .map(|k| {
            let base = routine_matches(&def.fields, grid.timestamp(k));
            let included = includes.iter().any(|s| s[k] == LogicSample::True);
            let excluded = excludes.iter().any(|s| s[k] == LogicSample::True);
            LogicSample::from_bool((base || included) && !excluded)
        })
        .collect();
    TimeSeries::logic(grid, samples).expect("sample per grid position")
}
