//! Violation tickets: durable records of when a rule was broken.
//!
//! A violation is a maximal run of consecutive `false` samples in a rule's
//! result series. Missing and undefined samples end a run but never start
//! one — a constraint we could not evaluate is not evidence of malfunction.
//! Tickets carry the sensor context a facility manager needs and survive
//! re-runs: identity is (rule, interval start), so re-importing the same
//! month cannot duplicate them, and a merge never deletes anything.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::eval::VirtualSensor;
use crate::timeseries::{LogicSample, SeriesValues, TimeGrid, TimeSeries, Timestamp};

/// Maximal run of consecutive false samples; `end` is exclusive, so the
/// interval covers `sample_count * step` seconds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationInterval {
    pub rule: String,
    pub start: Timestamp,
    pub end: Timestamp,
    pub sample_count: usize,
}

impl ViolationInterval {
    pub fn duration_secs(&self) -> i64 {
        self.end.seconds_since(self.start)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TicketStatus {
    Open,
    Resolved,
}

/// Sensor values around one violation, for display next to the ticket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensorExcerpt {
    pub sensor: String,
    pub start: Timestamp,
    pub step_secs: u64,
    pub values: SeriesValues,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ticket {
    /// `<rule>@<interval start>`; stable across re-runs.
    pub id: String,
    pub rule: String,
    pub interval: ViolationInterval,
    pub status: TicketStatus,
    /// The rule's context sensor ids, in declaration order.
    pub sensors: Vec<String>,
    /// One excerpt per context sensor with available data.
    pub excerpt: Vec<SensorExcerpt>,
    pub created_at: Timestamp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TicketConfig {
    /// Runs shorter than this are ignored (0 keeps every false run).
    pub min_duration_secs: u64,
    /// Extra samples on each side of the interval in excerpts.
    pub excerpt_padding: usize,
}

impl Default for TicketConfig {
    fn default() -> Self {
        TicketConfig { min_duration_secs: 0, excerpt_padding: 2 }
    }
}

/// Scan a rule's result series for violation intervals. Non-logic series
/// have none by definition.
pub fn extract_violations(vs: &VirtualSensor, cfg: &TicketConfig) -> Vec<ViolationInterval> {
    let Some(samples) = vs.series.logic_samples() else {
        return Vec::new();
    };
    let grid = vs.series.grid();
    let mut intervals = Vec::new();
    let mut run_start: Option<usize> = None;
    for k in 0..=samples.len() {
        let is_false = k < samples.len() && samples[k] == LogicSample::False;
        match (run_start, is_false) {
            (None, true) => run_start = Some(k),
            (Some(s), false) => {
                let count = k - s;
                if (count as u64) * grid.step_secs() >= cfg.min_duration_secs {
                    intervals.push(ViolationInterval {
                        rule: vs.name.clone(),
                        start: grid.timestamp(s),
                        end: grid.timestamp(k),
                        sample_count: count,
                    });
                }
                run_start = None;
            }
            _ => {}
        }
    }
    intervals
}

/// Build one ticket per interval, excerpting each context sensor over the
/// interval plus `excerpt_padding` samples on either side (clamped to the
/// grid).
pub fn open_tickets(
    intervals: &[ViolationInterval],
    context_sensors: &[String],
    data: &BTreeMap<String, TimeSeries>,
    grid: &TimeGrid,
    cfg: &TicketConfig,
    created_at: Timestamp,
) -> Vec<Ticket> {
    intervals
        .iter()
        .map(|interval| {
            let excerpt = match grid.index_of(interval.start) {
                Some(start_idx) => {
                    let lo = start_idx.saturating_sub(cfg.excerpt_padding);
                    let hi =
                        (start_idx + interval.sample_count + cfg.excerpt_padding).min(grid.count());
                    context_sensors
                        .iter()
                        .filter_map(|sensor| {
                            let series = data.get(sensor)?;
                            Some(SensorExcerpt {
                                sensor: sensor.clone(),
                                start: grid.timestamp(lo),
                                step_secs: grid.step_secs(),
                                values: slice_values(series.values(), lo, hi),
                            })
                        })
                        .collect()
                }
                None => Vec::new(),
            };
            Ticket {
                id: format!("{}@{}", interval.rule, interval.start),
                rule: interval.rule.clone(),
                interval: interval.clone(),
                status: TicketStatus::Open,
                sensors: context_sensors.to_vec(),
                excerpt,
                created_at,
            }
        })
        .collect()
}

fn slice_values(values: &SeriesValues, lo: usize, hi: usize) -> SeriesValues {
    match values {
        SeriesValues::Numeric(v) => SeriesValues::Numeric(v[lo..hi].to_vec()),
        SeriesValues::Logic(v) => SeriesValues::Logic(v[lo..hi].to_vec()),
    }
}

/// Reconcile the ticket store with a fresh run. Matched ids stay open with
/// refreshed interval data (original creation time kept); open tickets whose
/// violation is gone become resolved; resolved tickets whose violation
/// returns reopen; brand-new ids are appended. Nothing is ever deleted.
pub fn merge_tickets(previous: &[Ticket], current: &[Ticket]) -> Vec<Ticket> {
    let current_by_id: BTreeMap<&str, &Ticket> =
        current.iter().map(|t| (t.id.as_str(), t)).collect();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut merged = Vec::with_capacity(previous.len());
    for prev in previous {
        seen.insert(&prev.id);
        match current_by_id.get(prev.id.as_str()) {
            Some(cur) => {
                let mut ticket = (*cur).clone();
                ticket.status = TicketStatus::Open;
                ticket.created_at = prev.created_at;
                merged.push(ticket);
            }
            None => {
                let mut ticket = prev.clone();
                ticket.status = TicketStatus::Resolved;
                merged.push(ticket);
            }
        }
    }
    for cur in current {
        if !seen.contains(cur.id.as_str()) {
            merged.push(cur.clone());
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timeseries::NumericSample;
    use LogicSample::{False, Missing, True, Undefined};

    fn grid(count: usize) -> TimeGrid {
        TimeGrid::new(Timestamp::parse("2010-05-01T00:00:00").unwrap(), 900, count).unwrap()
    }

    fn vs(name: &str, samples: &[LogicSample]) -> VirtualSensor {
        VirtualSensor {
            name: name.to_string(),
            series: TimeSeries::logic(grid(samples.len()), samples.to_vec()).unwrap(),
        }
    }

    fn cfg() -> TicketConfig {
        TicketConfig { min_duration_secs: 0, excerpt_padding: 1 }
    }

    #[test]
    fn single_run_becomes_one_interval() {
        let out = extract_violations(&vs("R", &[True, False, False, False, True]), &cfg());
        assert_eq!(out.len(), 1);
        let iv = &out[0];
        assert_eq!(iv.start, Timestamp::parse("2010-05-01T00:15:00").unwrap());
        assert_eq!(iv.end, Timestamp::parse("2010-05-01T01:00:00").unwrap());
        assert_eq!(iv.sample_count, 3);
        assert_eq!(iv.duration_secs(), 2700); // 45 minutes
    }

    #[test]
    fn absent_samples_break_runs_without_violating() {
        let out = extract_violations(&vs("R", &[False, Missing, False]), &cfg());
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|iv| iv.sample_count == 1));
        let out = extract_violations(&vs("R", &[False, Undefined, False]), &cfg());
        assert_eq!(out.len(), 2);
        let out = extract_violations(&vs("R", &[Missing, Undefined, Missing]), &cfg());
        assert!(out.is_empty());
    }

    #[test]
    fn conforming_series_has_no_intervals() {
        assert!(extract_violations(&vs("R", &[True; 6]), &cfg()).is_empty());
    }

    #[test]
    fn runs_touching_the_edges_are_kept() {
        let out = extract_violations(&vs("R", &[False, False, True, False]), &cfg());
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].start, Timestamp::parse("2010-05-01T00:00:00").unwrap());
        assert_eq!(out[1].end, Timestamp::parse("2010-05-01T01:00:00").unwrap());
    }

    #[test]
    fn short_runs_are_dropped_by_min_duration() {
        let samples = [True, False, False, False, True, False, True];
        let keep_all = TicketConfig { min_duration_secs: 0, ..cfg() };
        assert_eq!(extract_violations(&vs("R", &samples), &keep_all).len(), 2);
        let only_long = TicketConfig { min_duration_secs: 1800, ..cfg() };
        let out = extract_violations(&vs("R", &samples), &only_long);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].sample_count, 3);
        let too_strict = TicketConfig { min_duration_secs: 2701, ..cfg() };
        assert!(extract_violations(&vs("R", &samples), &too_strict).is_empty());
    }

    #[test]
    fn interval_counts_add_up_to_false_samples() {
        let samples = [False, False, Missing, False, True, False, False, Undefined, False];
        let out = extract_violations(&vs("R", &samples), &cfg());
        let total: usize = out.iter().map(|iv| iv.sample_count).sum();
        let false_count = samples.iter().filter(|&&s| s == False).count();
        assert_eq!(total, false_count);
    }

    fn sample_data() -> (BTreeMap<String, TimeSeries>, TimeGrid) {
        let g = grid(5);
        let mut data = BTreeMap::new();
        data.insert(
            "i2".to_string(),
            TimeSeries::numeric(
                g,
                (0..5).map(|k| NumericSample::Value(k as f64)).collect(),
            )
            .unwrap(),
        );
        data.insert(
            "i4".to_string(),
            TimeSeries::logic(g, vec![True, True, False, False, True]).unwrap(),
        );
        (data, g)
    }

    #[test]
    fn tickets_carry_context_excerpts_with_padding() {
        let (data, g) = sample_data();
        let intervals = extract_violations(&vs("R", &[True, False, False, False, True]), &cfg());
        let now = Timestamp::parse("2010-06-01T12:00:00").unwrap();
        let sensors = vec!["i2".to_string(), "i4".to_string()];
        let tickets = open_tickets(&intervals, &sensors, &data, &g, &cfg(), now);
        assert_eq!(tickets.len(), 1);
        let t = &tickets[0];
        assert_eq!(t.id, "R@2010-05-01T00:15:00");
        assert_eq!(t.status, TicketStatus::Open);
        assert_eq!(t.sensors, sensors);
        assert_eq!(t.created_at, now);
        assert_eq!(t.excerpt.len(), 2);
        // Padding 1 around samples 1..4 clamps to the whole 5-sample grid.
        let e = &t.excerpt[0];
        assert_eq!(e.sensor, "i2");
        assert_eq!(e.start, Timestamp::parse("2010-05-01T00:00:00").unwrap());
        assert_eq!(e.values.len(), 5);
        let SeriesValues::Numeric(v) = &e.values else { panic!() };
        assert_eq!(v[0], NumericSample::Value(0.0));
        assert_eq!(t.excerpt[1].values.len(), 5);
    }

    #[test]
    fn no_intervals_no_tickets() {
        let (data, g) = sample_data();
        let now = Timestamp::parse("2010-06-01T12:00:00").unwrap();
        assert!(open_tickets(&[], &["i2".to_string()], &data, &g, &cfg(), now).is_empty());
    }

    #[test]
    fn sensors_without_data_are_listed_but_not_excerpted() {
        let (data, g) = sample_data();
        let intervals = extract_violations(&vs("R", &[False, True, True, True, True]), &cfg());
        let sensors = vec!["i2".to_string(), "ghost".to_string()];
        let now = Timestamp::parse("2010-06-01T12:00:00").unwrap();
        let tickets = open_tickets(&intervals, &sensors, &data, &g, &cfg(), now);
        assert_eq!(tickets[0].sensors.len(), 2);
        assert_eq!(tickets[0].excerpt.len(), 1);
        assert_eq!(tickets[0].excerpt[0].sensor, "i2");
    }

    fn quick_ticket(id: &str, status: TicketStatus) -> Ticket {
        let start = Timestamp::parse("2010-05-01T00:15:00").unwrap();
        Ticket {
            id: id.to_string(),
            rule: "R".to_string(),
            interval: ViolationInterval {
                rule: "R".to_string(),
                start,
                end: start.plus_seconds(900),
                sample_count: 1,
            },
            status,
            sensors: vec![],
            excerpt: vec![],
            created_at: Timestamp::parse("2010-06-01T00:00:00").unwrap(),
        }
    }

    #[test]
    fn merge_keeps_matches_resolves_gone_appends_new() {
        let t1 = quick_ticket("T1", TicketStatus::Open);
        let t2 = quick_ticket("T2", TicketStatus::Open);
        let previous = [t1.clone()];
        let merged = merge_tickets(&previous, &[t1.clone(), t2.clone()]);
        assert_eq!(merged.len(), 2);
        assert_eq!(merged[0].status, TicketStatus::Open);
        assert_eq!(merged[1].id, "T2");

        let merged = merge_tickets(&previous, &[]);
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0].status, TicketStatus::Resolved);

        let merged = merge_tickets(&[], std::slice::from_ref(&t2));
        assert_eq!(merged, vec![t2]);
    }

    #[test]
    fn merge_reopens_and_keeps_creation_time() {
        let mut old = quick_ticket("T1", TicketStatus::Resolved);
        old.created_at = Timestamp::parse("2010-01-01T00:00:00").unwrap();
        let mut fresh = quick_ticket("T1", TicketStatus::Open);
        fresh.interval.end = fresh.interval.start.plus_seconds(1800); // grew
        let merged = merge_tickets(&[old.clone()], &[fresh.clone()]);
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0].status, TicketStatus::Open);
        assert_eq!(merged[0].created_at, old.created_at);
        assert_eq!(merged[0].interval, fresh.interval);
    }

    #[test]
    fn merge_is_idempotent_and_never_deletes() {
        let t1 = quick_ticket("T1", TicketStatus::Open);
        let t2 = quick_ticket("T2", TicketStatus::Open);
        let list = vec![t1, t2];
        assert_eq!(merge_tickets(&list, &list), list);
        let merged = merge_tickets(&list, &list[..1]);
        assert_eq!(merged.len(), 2);
    }

    #[test]
    fn ticket_serde_round_trip() {
        let (data, g) = sample_data();
        let intervals = extract_violations(&vs("R", &[True, False, False, True, True]), &cfg());
        let sensors = vec!["i4".to_string()];
        let now = Timestamp::parse("2010-06-01T12:00:00").unwrap();
        let tickets = open_tickets(&intervals, &sensors, &data, &g, &cfg(), now);
        let json = serde_json::to_string(&tickets).unwrap();
        let back: Vec<Ticket> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, tickets);
    }
}
