use super::{
    LogicSample, NumericSample, SeriesKind, TimeGrid, TimeSeries, TimeSeriesError,
    Timestamp,
};

/// Tuning knobs for the preprocessing stage.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreprocessConfig {
    /// Target grid step in seconds.
    pub target_step: u64,
    /// Maximum bridged distance in seconds for alignment and gap filling.
    pub max_gap: u64,
    /// Window width of the moving-median outlier filter, odd, >= 3.
    pub outlier_window: usize,
    /// Absolute deviation from the window median, in sensor units, above
    /// which a sample is flagged.
    pub outlier_threshold: f64,
}

impl PreprocessConfig {
    pub fn validate(&self) -> Result<(), TimeSeriesError> {
        let fail = |msg: &str| Err(TimeSeriesError::InvalidConfig(msg.to_string()));
        if self.target_step == 0 {
            return fail("target_step must be positive");
        }
        if self.max_gap == 0 {
            return fail("max_gap must be positive");
        }
        if self.outlier_window < 3 || self.outlier_window.is_multiple_of(2) {
            return fail("outlier_window must be an odd sample count >= 3");
        }
        if self.outlier_threshold.is_nan() || self.outlier_threshold <= 0.0 {
            return fail("outlier_threshold must be positive");
        }
        Ok(())
    }
}

fn check_sorted(raw: &[(Timestamp, f64)]) -> Result<(), TimeSeriesError> {
    for (row, pair) in raw.windows(2).enumerate() {
        if pair[1].0 == pair[0].0 {
            return Err(TimeSeriesError::DuplicateTimestamp(row + 1, pair[1].0));
        }
        if pair[1].0 < pair[0].0 {
            return Err(TimeSeriesError::UnsortedInput(row + 1, pair[1].0));
        }
    }
    Ok(())
}

/// Nearest raw neighbors of `t`: index of the last raw point `<= t` and the
/// first raw point `>= t`.
fn enclosing(raw: &[(Timestamp, f64)], t: Timestamp) -> (Option<usize>, Option<usize>) {
    let right = raw.partition_point(|(rt, _)| *rt < t);
    if right < raw.len() && raw[right].0 == t {
        return (Some(right), Some(right));
    }
    let left = right.checked_sub(1);
    let right = (right < raw.len()).then_some(right);
    (left, right)
}

/// Transform irregular raw readings to an equidistant numeric series.
///
/// A grid point takes the exact raw value if one coincides, the linear
/// interpolation of the nearest enclosing raw points if both lie within
/// `max_gap` seconds of it, and is missing otherwise; grid points outside the
/// raw time span are missing.
pub fn align_to_grid(
    raw: &[(Timestamp, f64)],
    grid: TimeGrid,
    max_gap: u64,
) -> Result<TimeSeries, TimeSeriesError> {
    check_sorted(raw)?;
    let samples = grid
        .timestamps()
        .map(|t| match enclosing(raw, t) {
            (Some(l), Some(r)) if l == r => NumericSample::from_value(raw[l].1),
            (Some(l), Some(r)) => {
                let (lt, lv) = raw[l];
                let (rt, rv) = raw[r];
                let to_left = t.seconds_since(lt);
                let to_right = rt.seconds_since(t);
                if to_left as u64 <= max_gap && to_right as u64 <= max_gap {
                    let frac = to_left as f64 / rt.seconds_since(lt) as f64;
                    NumericSample::from_value(lv + frac * (rv - lv))
                } else {
                    NumericSample::Missing
                }
            }
            _ => NumericSample::Missing,
        })
        .collect();
    TimeSeries::numeric(grid, samples)
}

/// Transform irregular raw logic readings (non-zero = true) to an equidistant
/// logic series by snapping each grid point to the nearest raw reading within
/// `max_gap` seconds; ties prefer the earlier reading. Truth values are never
/// interpolated.
pub fn align_logic_to_grid(
    raw: &[(Timestamp, f64)],
    grid: TimeGrid,
    max_gap: u64,
) -> Result<TimeSeries, TimeSeriesError> {
    check_sorted(raw)?;
    let samples = grid
        .timestamps()
        .map(|t| {
            let (left, right) = enclosing(raw, t);
            let nearest = match (left, right) {
                (Some(l), Some(r)) => {
                    if t.seconds_since(raw[l].0) <= raw[r].0.seconds_since(t) {
                        Some(l)
                    } else {
                        Some(r)
                    }
                }
                (one, None) | (None, one) => one,
            };
            match nearest {
                Some(i) if t.seconds_since(raw[i].0).unsigned_abs() <= max_gap => {
                    LogicSample::from_bool(raw[i].1 != 0.0)
                }
                _ => LogicSample::Missing,
            }
        })
        .collect();
    TimeSeries::logic(grid, samples)
}

/// Fill interior gaps of a numeric series by linear interpolation.
///
/// A run of missing samples is filled when it is bounded by present samples
/// on both sides and the time between those anchors is at most `max_gap`
/// seconds. Undefined samples are never created or consumed; leading and
/// trailing gaps stay missing.
pub fn interpolate_gaps(series: &TimeSeries, max_gap: u64) -> Result<TimeSeries, TimeSeriesError> {
    let samples = series.numeric_samples().ok_or(TimeSeriesError::KindMismatch {
        expected: SeriesKind::Numeric,
        found: series.kind(),
    })?;
    let step = series.grid().step_secs();
    let mut out = samples.to_vec();

    let mut k = 0;
    while k < out.len() {
        if !out[k].is_missing() {
            k += 1;
            continue;
        }
        let run_start = k;
        while k < out.len() && out[k].is_missing() {
            k += 1;
        }
        let run_end = k; // exclusive
        let left = run_start.checked_sub(1).and_then(|i| out[i].value());
        let right = (run_end < out.len()).then(|| out[run_end].value()).flatten();
        if let (Some(lv), Some(rv)) = (left, right) {
            let span = (run_end - run_start + 1) as u64 * step;
            if span <= max_gap {
                let anchor = run_start - 1;
                for (i, slot) in out.iter_mut().enumerate().take(run_end).skip(run_start) {
                    let frac = (i - anchor) as f64 / (run_end - anchor) as f64;
                    *slot = NumericSample::from_value(lv + frac * (rv - lv));
                }
            }
        }
    }
    TimeSeries::numeric(*series.grid(), out)
}

/// Moving-median outlier filter with an absolute threshold in sensor units.
///
/// A present sample is flagged when it deviates from the median of the
/// present samples in a centered window of `outlier_window` indices by more
/// than `outlier_threshold`. Flagged samples become missing in the output so
/// a later gap-interpolation pass can repair them. Windows shrink at the
/// series edges; a sample with fewer than 3 present window samples is never
/// flagged.
pub fn detect_outliers(
    series: &TimeSeries,
    cfg: &PreprocessConfig,
) -> Result<(TimeSeries, Vec<bool>), TimeSeriesError> {
    cfg.validate()?;
    let samples = series.numeric_samples().ok_or(TimeSeriesError::KindMismatch {
        expected: SeriesKind::Numeric,
        found: series.kind(),
    })?;
    let half = cfg.outlier_window / 2;
    let mut out = samples.to_vec();
    let mut mask = vec![false; samples.len()];
    let mut window = Vec::with_capacity(cfg.outlier_window);

    for (k, sample) in samples.iter().enumerate() {
        let Some(x) = sample.value() else { continue };
        window.clear();
        window.extend(
            samples[k.saturating_sub(half)..(k + half + 1).min(samples.len())]
                .iter()
                .filter_map(|s| s.value()),
        );
        if window.len() < 3 {
            continue;
        }
        if (x - median_in_place(&mut window)).abs() > cfg.outlier_threshold {
            out[k] = NumericSample::Missing;
            mask[k] = true;
        }
    }
    Ok((TimeSeries::numeric(*series.grid(), out)?, mask))
}

/// Median of a non-empty slice; an even count averages the middle pair.
fn median_in_place(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite sensor values"));
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(text: &str) -> Timestamp {
        Timestamp::parse(text).unwrap()
    }

    fn grid(step: u64, count: usize) -> TimeGrid {
        TimeGrid::new(ts("2010-05-01T00:00:00"), step, count).unwrap()
    }

    fn num(values: &[NumericSample], step: u64) -> TimeSeries {
        TimeSeries::numeric(grid(step, values.len()), values.to_vec()).unwrap()
    }

    fn v(x: f64) -> NumericSample {
        NumericSample::Value(x)
    }

    const M: NumericSample = NumericSample::Missing;
    const U: NumericSample = NumericSample::Undefined;

    fn cfg(window: usize, threshold: f64) -> PreprocessConfig {
        PreprocessConfig {
            target_step: 900,
            max_gap: 1800,
            outlier_window: window,
            outlier_threshold: threshold,
        }
    }

    #[test]
    fn align_linear_midpoint() {
        let raw = [(ts("2010-05-01T00:00:00"), 10.0), (ts("2010-05-01T00:30:00"), 20.0)];
        let s = align_to_grid(&raw, grid(900, 3), 1800).unwrap();
        assert_eq!(s.numeric_samples().unwrap(), &[v(10.0), v(15.0), v(20.0)]);
    }

    #[test]
    fn align_without_right_neighbor() {
        let raw = [(ts("2010-05-01T00:00:00"), 10.0)];
        let s = align_to_grid(&raw, grid(900, 2), 900).unwrap();
        assert_eq!(s.numeric_samples().unwrap(), &[v(10.0), M]);
    }

    #[test]
    fn align_wide_gap_leaves_interior_missing() {
        // Anchors at 00:00 and 02:00; every interior quarter-hour point is
        // farther than 1800 s from at least one anchor, so only the exact
        // endpoints carry values.
        let raw = [(ts("2010-05-01T00:00:00"), 10.0), (ts("2010-05-01T02:00:00"), 20.0)];
        let s = align_to_grid(&raw, grid(900, 9), 1800).unwrap();
        assert_eq!(
            s.numeric_samples().unwrap(),
            &[v(10.0), M, M, M, M, M, M, M, v(20.0)]
        );
    }

    #[test]
    fn align_identity_on_gridded_points() {
        let g = grid(900, 4);
        let raw: Vec<(Timestamp, f64)> =
            g.timestamps().enumerate().map(|(i, t)| (t, i as f64 * 2.0)).collect();
        let s = align_to_grid(&raw, g, 900).unwrap();
        assert_eq!(
            s.numeric_samples().unwrap(),
            &[v(0.0), v(2.0), v(4.0), v(6.0)]
        );
    }

    #[test]
    fn align_rejects_unsorted_and_duplicates() {
        let g = grid(900, 2);
        let unsorted = [(ts("2010-05-01T00:15:00"), 1.0), (ts("2010-05-01T00:00:00"), 2.0)];
        assert!(matches!(
            align_to_grid(&unsorted, g, 900),
            Err(TimeSeriesError::UnsortedInput(1, _))
        ));
        let dup = [(ts("2010-05-01T00:00:00"), 1.0), (ts("2010-05-01T00:00:00"), 2.0)];
        assert!(matches!(
            align_to_grid(&dup, g, 900),
            Err(TimeSeriesError::DuplicateTimestamp(1, _))
        ));
    }

    #[test]
    fn align_empty_raw_is_all_missing() {
        let s = align_to_grid(&[], grid(900, 3), 900).unwrap();
        assert_eq!(s.numeric_samples().unwrap(), &[M, M, M]);
    }

    #[test]
    fn align_logic_snaps_to_nearest() {
        let raw = [(ts("2010-05-01T00:00:00"), 1.0), (ts("2010-05-01T00:29:00"), 0.0)];
        let s = align_logic_to_grid(&raw, grid(900, 3), 900).unwrap();
        assert_eq!(
            s.logic_samples().unwrap(),
            &[LogicSample::True, LogicSample::False, LogicSample::False]
        );
    }

    #[test]
    fn align_logic_respects_max_gap() {
        let raw = [(ts("2010-05-01T00:00:00"), 1.0)];
        let s = align_logic_to_grid(&raw, grid(900, 3), 900).unwrap();
        assert_eq!(
            s.logic_samples().unwrap(),
            &[LogicSample::True, LogicSample::True, LogicSample::Missing]
        );
    }

    #[test]
    fn interpolate_fills_linear_midpoint() {
        let s = interpolate_gaps(&num(&[v(10.0), M, v(20.0)], 900), 1800).unwrap();
        assert_eq!(s.numeric_samples().unwrap(), &[v(10.0), v(15.0), v(20.0)]);
    }

    #[test]
    fn interpolate_leaves_leading_gap() {
        let s = interpolate_gaps(&num(&[M, v(10.0), v(20.0)], 900), 1800).unwrap();
        assert_eq!(s.numeric_samples().unwrap(), &[M, v(10.0), v(20.0)]);
    }

    #[test]
    fn interpolate_respects_max_gap() {
        // The anchors sit 3600 s apart, beyond the 1800 s limit.
        let before = num(&[v(10.0), M, M, M, v(50.0)], 900);
        let after = interpolate_gaps(&before, 1800).unwrap();
        assert_eq!(after, before);
    }

    #[test]
    fn interpolate_never_consumes_undefined() {
        let s = interpolate_gaps(&num(&[v(10.0), M, U, M, v(50.0)], 900), 7200).unwrap();
        // Undefined is no anchor and no gap member: both runs stay missing.
        assert_eq!(s.numeric_samples().unwrap(), &[v(10.0), M, U, M, v(50.0)]);
    }

    #[test]
    fn interpolate_is_idempotent() {
        let s = num(&[M, v(10.0), M, M, v(40.0), U, v(7.0), M], 900);
        let once = interpolate_gaps(&s, 2700).unwrap();
        let twice = interpolate_gaps(&once, 2700).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn interpolate_rejects_logic_series() {
        let s = TimeSeries::logic(grid(900, 1), vec![LogicSample::True]).unwrap();
        assert!(matches!(
            interpolate_gaps(&s, 900),
            Err(TimeSeriesError::KindMismatch { .. })
        ));
    }

    #[test]
    fn hampel_flags_the_spike() {
        // Window of 5 around index 3 shrinks to {10, 10, 100, 10};
        // median 10, |100 - 10| = 90 > 10.
        let s = num(&[v(10.0), v(10.0), v(10.0), v(100.0), v(10.0)], 900);
        let (out, mask) = detect_outliers(&s, &cfg(5, 10.0)).unwrap();
        assert_eq!(mask, [false, false, false, true, false]);
        assert_eq!(
            out.numeric_samples().unwrap(),
            &[v(10.0), v(10.0), v(10.0), M, v(10.0)]
        );
    }

    #[test]
    fn hampel_constant_series_unflagged() {
        let s = num(&[v(10.0), v(10.0), v(10.0), v(10.0)], 900);
        let (out, mask) = detect_outliers(&s, &cfg(3, 0.001)).unwrap();
        assert!(mask.iter().all(|&f| !f));
        assert_eq!(out, s);
    }

    #[test]
    fn hampel_skips_absent_samples() {
        let s = num(&[M, v(10.0), v(10.0)], 900);
        let (out, mask) = detect_outliers(&s, &cfg(3, 1.0)).unwrap();
        assert_eq!(mask, [false, false, false]);
        assert_eq!(out, s);
    }

    #[test]
    fn hampel_needs_three_present_window_samples() {
        // Index 0 sees only {5.0, 100.0} in its shrunk window: never flagged.
        let s = num(&[v(5.0), v(100.0), M, M, M], 900);
        let (_, mask) = detect_outliers(&s, &cfg(3, 1.0)).unwrap();
        assert_eq!(mask, [false, false, false, false, false]);
    }

    #[test]
    fn hampel_mask_len_and_grid_preserved() {
        let s = num(&[v(1.0), v(2.0), v(50.0), v(2.0), v(1.0), U], 900);
        let (out, mask) = detect_outliers(&s, &cfg(5, 10.0)).unwrap();
        assert_eq!(mask.len(), s.len());
        assert_eq!(out.grid(), s.grid());
        assert_eq!(out.kind(), s.kind());
        // Unflagged samples are untouched.
        for (k, flagged) in mask.iter().enumerate() {
            if !flagged {
                assert_eq!(out.numeric_samples().unwrap()[k], s.numeric_samples().unwrap()[k]);
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(cfg(5, 10.0).validate().is_ok());
        assert!(cfg(4, 10.0).validate().is_err());
        assert!(cfg(1, 10.0).validate().is_err());
        assert!(cfg(5, 0.0).validate().is_err());
        let mut c = cfg(5, 10.0);
        c.max_gap = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn coverage_never_drops_after_interpolation() {
        let s = num(&[M, v(1.0), M, v(3.0), M, M, v(6.0), U], 900);
        let filled = interpolate_gaps(&s, 3600).unwrap();
        assert!(filled.coverage() >= s.coverage());
    }
}
