//! Calendar-bucketed aggregation of numeric series.
//!
//! Buckets follow the calendar (hours, days, Monday-started weeks, months,
//! quarters, years) rather than fixed sample counts, so a month bucket is as
//! long as the month. Each bucket is stamped with its calendar start and
//! aggregates only the samples that were present; an empty bucket is
//! missing, never zero.

use serde::{Deserialize, Serialize};

use crate::lang::{MetricBase, TimeFilter};
use crate::timeseries::{NumericSample, TimeGrid, Timestamp};

use super::EvalError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricBucket {
    /// Calendar start of the bucket (e.g. Monday 00:00:00 for a week).
    pub start: Timestamp,
    pub value: NumericSample,
    /// Present samples over grid samples in the bucket, in 0..=1.
    pub coverage: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    pub name: String,
    pub filter: TimeFilter,
    pub buckets: Vec<MetricBucket>,
}

pub fn bucket_start(filter: TimeFilter, t: Timestamp) -> Timestamp {
    match filter {
        TimeFilter::PerHour => t.start_of_hour(),
        TimeFilter::PerDay => t.start_of_day(),
        TimeFilter::PerWeek => t.start_of_week(),
        TimeFilter::PerMonth => t.start_of_month(),
        TimeFilter::PerQuarter => t.start_of_quarter(),
        TimeFilter::PerYear => t.start_of_year(),
    }
}

fn aggregate(base: &MetricBase, values: &[f64]) -> Result<NumericSample, EvalError> {
    if values.is_empty() {
        return Ok(NumericSample::Missing);
    }
    let n = values.len() as f64;
    let result = match base {
        MetricBase::Average => values.iter().sum::<f64>() / n,
        MetricBase::Sum => values.iter().sum::<f64>(),
        MetricBase::Maximum => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        MetricBase::Minimum => values.iter().copied().fold(f64::INFINITY, f64::min),
        MetricBase::Named { name, params } => match name.as_str() {
            "STDDEV" => {
                let mean = values.iter().sum::<f64>() / n;
                let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
                var.sqrt()
            }
            "PERCENTILE" if params.len() == 1 => percentile(values, params[0]),
            other => return Err(EvalError::UnknownAggregate(other.to_string())),
        },
    };
    Ok(NumericSample::from_value(result))
}

/// Linear-interpolation percentile: rank p/100 * (n-1) into the sorted
/// values, fractional ranks interpolated between neighbours.
fn percentile(values: &[f64], p: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = p / 100.0 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = rank - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Aggregate a numeric column into calendar buckets. `samples` must have one
/// entry per grid position.
pub fn eval_metric(
    name: &str,
    base: &MetricBase,
    filter: TimeFilter,
    grid: &TimeGrid,
    samples: &[NumericSample],
) -> Result<MetricResult, EvalError> {
    debug_assert_eq!(samples.len(), grid.count());
    let mut buckets = Vec::new();
    let mut current: Option<Timestamp> = None;
    let mut values: Vec<f64> = Vec::new();
    let mut total = 0usize;

    let flush = |start: Option<Timestamp>,
                     values: &mut Vec<f64>,
                     total: &mut usize,
                     buckets: &mut Vec<MetricBucket>|
     -> Result<(), EvalError> {
        if let Some(start) = start {
            let value = aggregate(base, values)?;
            let coverage = if *total == 0 { 0.0 } else { values.len() as f64 / *total as f64 };
            buckets.push(MetricBucket { start, value, coverage });
        }
        values.clear();
        *total = 0;
        Ok(())
    };

    for (k, sample) in samples.iter().enumerate() {
        let start = bucket_start(filter, grid.timestamp(k));
        if current != Some(start) {
            flush(current, &mut values, &mut total, &mut buckets)?;
            current = Some(start);
        }
        total += 1;
        if let Some(v) = sample.value() {
            values.push(v);
        }
    }
    flush(current, &mut values, &mut total, &mut buckets)?;

    Ok(MetricResult { name: name.to_string(), filter, buckets })
}
