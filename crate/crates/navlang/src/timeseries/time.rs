use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate, NaiveDateTime, Timelike};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::TimeSeriesError;

/// Calendar date-time with second resolution, timezone-naive local time.
///
/// Differences between two timestamps are whole seconds; sub-second input is
/// truncated on construction.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(NaiveDateTime);

impl Timestamp {
    /// Build a timestamp from calendar components. `None` for impossible
    /// dates (month 13, Feb 30, hour 25, ...).
    pub fn from_ymd_hms(
        year: i32,
        month: u32,
        day: u32,
        hour: u32,
        minute: u32,
        second: u32,
    ) -> Option<Self> {
        let date = NaiveDate::from_ymd_opt(year, month, day)?;
        let dt = date.and_hms_opt(hour, minute, second)?;
        Some(Timestamp(dt))
    }

    /// Parse `YYYY-MM-DDTHH:MM:SS`; a space instead of the `T` is accepted.
    pub fn parse(text: &str) -> Result<Self, TimeSeriesError> {
        let bad = || TimeSeriesError::BadTimestamp(text.to_string());
        let dt = NaiveDateTime::parse_from_str(text, "%Y-%m-%dT%H:%M:%S")
            .or_else(|_| NaiveDateTime::parse_from_str(text, "%Y-%m-%d %H:%M:%S"))
            .map_err(|_| bad())?;
        Ok(Timestamp(dt))
    }

    /// Parse with an explicit chrono format string, truncating to seconds.
    pub fn parse_with_format(text: &str, format: &str) -> Result<Self, TimeSeriesError> {
        let dt = NaiveDateTime::parse_from_str(text, format)
            .map_err(|_| TimeSeriesError::BadTimestamp(text.to_string()))?;
        Ok(Timestamp(dt.with_nanosecond(0).unwrap_or(dt)))
    }

    pub fn plus_seconds(self, seconds: i64) -> Self {
        Timestamp(self.0 + chrono::Duration::seconds(seconds))
    }

    /// Signed whole-second difference `self - earlier`.
    pub fn seconds_since(self, earlier: Timestamp) -> i64 {
        (self.0 - earlier.0).num_seconds()
    }

    pub fn year(self) -> i32 {
        self.0.year()
    }

    pub fn month(self) -> u32 {
        self.0.month()
    }

    pub fn day(self) -> u32 {
        self.0.day()
    }

    /// Day of week computed from the date, Monday = 1 through Sunday = 7.
    pub fn weekday(self) -> u32 {
        self.0.weekday().number_from_monday()
    }

    pub fn hour(self) -> u32 {
        self.0.hour()
    }

    pub fn minute(self) -> u32 {
        self.0.minute()
    }

    pub fn second(self) -> u32 {
        self.0.second()
    }

    /// Midnight of the same calendar day.
    pub fn start_of_day(self) -> Self {
        Timestamp(self.0.date().and_hms_opt(0, 0, 0).expect("midnight"))
    }

    /// Start of the clock hour.
    pub fn start_of_hour(self) -> Self {
        Timestamp(
            self.0
                .date()
                .and_hms_opt(self.0.hour(), 0, 0)
                .expect("hour start"),
        )
    }

    /// Monday 00:00:00 of the same ISO week.
    pub fn start_of_week(self) -> Self {
        let back = self.0.weekday().num_days_from_monday() as i64;
        Timestamp((self.0.date() - chrono::Duration::days(back)).and_hms_opt(0, 0, 0).expect("midnight"))
    }

    /// First of the month, 00:00:00.
    pub fn start_of_month(self) -> Self {
        let date = NaiveDate::from_ymd_opt(self.0.year(), self.0.month(), 1).expect("first of month");
        Timestamp(date.and_hms_opt(0, 0, 0).expect("midnight"))
    }

    /// First day of the calendar quarter (Jan/Apr/Jul/Oct), 00:00:00.
    pub fn start_of_quarter(self) -> Self {
        let month = ((self.0.month() - 1) / 3) * 3 + 1;
        let date = NaiveDate::from_ymd_opt(self.0.year(), month, 1).expect("quarter start");
        Timestamp(date.and_hms_opt(0, 0, 0).expect("midnight"))
    }

    /// January 1st, 00:00:00.
    pub fn start_of_year(self) -> Self {
        let date = NaiveDate::from_ymd_opt(self.0.year(), 1, 1).expect("year start");
        Timestamp(date.and_hms_opt(0, 0, 0).expect("midnight"))
    }

    /// Whole seconds since 1970-01-01T00:00:00 (naive, no zone applied).
    pub fn epoch_seconds(self) -> i64 {
        self.0.and_utc().timestamp()
    }

    pub fn from_epoch_seconds(seconds: i64) -> Option<Self> {
        chrono::DateTime::from_timestamp(seconds, 0).map(|dt| Timestamp(dt.naive_utc()))
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format("%Y-%m-%dT%H:%M:%S"))
    }
}

impl fmt::Debug for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Timestamp {
    type Err = TimeSeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Timestamp::parse(s)
    }
}

impl Serialize for Timestamp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Timestamp::parse(&text).map_err(de::Error::custom)
    }
}

/// Equidistant sampling grid: `count` timestamps spaced `step_secs` apart,
/// starting at `start`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TimeGrid {
    start: Timestamp,
    step_secs: u64,
    count: usize,
}

impl TimeGrid {
    pub fn new(start: Timestamp, step_secs: u64, count: usize) -> Result<Self, TimeSeriesError> {
        if step_secs == 0 {
            return Err(TimeSeriesError::ZeroStep);
        }
        Ok(TimeGrid { start, step_secs, count })
    }

    pub fn start(&self) -> Timestamp {
        self.start
    }

    pub fn step_secs(&self) -> u64 {
        self.step_secs
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Timestamp of sample `k`; `k` may lie beyond the grid, which is useful
    /// for half-open interval ends.
    pub fn timestamp(&self, k: usize) -> Timestamp {
        self.start.plus_seconds(k as i64 * self.step_secs as i64)
    }

    /// Index of the sample at exactly `t`, if `t` lies on the grid.
    pub fn index_of(&self, t: Timestamp) -> Option<usize> {
        let offset = t.seconds_since(self.start);
        if offset < 0 || offset % self.step_secs as i64 != 0 {
            return None;
        }
        let k = (offset / self.step_secs as i64) as usize;
        (k < self.count).then_some(k)
    }

    pub fn timestamps(&self) -> impl Iterator<Item = Timestamp> + '_ {
        (0..self.count).map(|k| self.timestamp(k))
    }

    /// Last grid timestamp, `None` for an empty grid.
    pub fn last(&self) -> Option<Timestamp> {
        (self.count > 0).then(|| self.timestamp(self.count - 1))
    }
}
