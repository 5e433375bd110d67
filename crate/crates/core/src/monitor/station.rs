use std::collections::VecDeque;

use chrono::{DateTime, FixedOffset, TimeDelta, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::describe::{default_blacklist, is_excluded, ExclusionReason};
use super::schedule::in_blackout_window;
use crate::clock::Clock;
use crate::domain::{EventId, EventRecord, StationId, StationRecord};

pub const POLL_ATTEMPTS: u32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MonitorConfig {
    pub events_per_station: u32,
    pub poll_interval_s: u32,
    /// Lower-case terms; a description containing any of them is dropped.
    pub blacklist: Vec<String>,
    pub blackout_half_width_min: u32,
    pub station_sample_size: usize,
    pub rng_seed: u64,
    /// Upper bound on poll slots per station, for looping sources that never
    /// reach the quota. `None` means unbounded.
    pub max_polls: Option<u64>,
}

impl Default for MonitorConfig {
    fn default() -> Self {
        Self {
            events_per_station: 100,
            poll_interval_s: 30,
            blacklist: default_blacklist(),
            blackout_half_width_min: 5,
            station_sample_size: 10_000,
            rng_seed: 0,
            max_polls: Some(100_000),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("events_per_station must be at least 1")]
    Quota,
    #[error("poll_interval_s must be at least 1")]
    Interval,
    #[error("blackout_half_width_min must lie in [0, 15], got {0}")]
    HalfWidth(u32),
    #[error("station_sample_size must be at least 1")]
    SampleSize,
    #[error("blacklist term {0:?} is not lower-case")]
    BlacklistCase(String),
}

impl MonitorConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.events_per_station < 1 {
            return Err(ConfigError::Quota);
        }
        if self.poll_interval_s < 1 {
            return Err(ConfigError::Interval);
        }
        if self.blackout_half_width_min > 15 {
            return Err(ConfigError::HalfWidth(self.blackout_half_width_min));
        }
        if self.station_sample_size < 1 {
            return Err(ConfigError::SampleSize);
        }
        if let Some(t) = self.blacklist.iter().find(|t| t.to_lowercase() != **t) {
            return Err(ConfigError::BlacklistCase(t.clone()));
        }
        Ok(())
    }
}

/// One poll result: the decoded stream title (empty when the encoder sent none).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamMetadata {
    pub stream_title: String,
    pub captured_at: DateTime<Utc>,
    pub station_id: StationId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Poll {
    Metadata(StreamMetadata),
    /// The source has nothing further to play for this station.
    EndOfScript,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SourceError {
    #[error("connection to station {station} failed: {message}")]
    Connection { station: StationId, message: String },
    #[error("station {0} is unknown to the source")]
    UnknownStation(StationId),
    #[error("malformed metadata from station {station}: {message}")]
    Protocol { station: StationId, message: String },
}

/// Anything that can be asked for a station's current stream metadata.
pub trait MetadataSource {
    fn poll(&mut self, station: &StationId, at: DateTime<Utc>) -> Result<Poll, SourceError>;
}

/// In-memory source replaying one payload per poll; `None` entries simulate a
/// failed connection. Signals end-of-script when exhausted.
#[derive(Debug, Clone, Default)]
pub struct ScriptedSource {
    queue: VecDeque<Option<String>>,
}

impl ScriptedSource {
    pub fn new<I, S>(payloads: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            queue: payloads.into_iter().map(|p| Some(p.into())).collect(),
        }
    }

    pub fn with_failures(entries: Vec<Option<String>>) -> Self {
        Self { queue: entries.into() }
    }
}

impl MetadataSource for ScriptedSource {
    fn poll(&mut self, station: &StationId, at: DateTime<Utc>) -> Result<Poll, SourceError> {
        match self.queue.pop_front() {
            None => Ok(Poll::EndOfScript),
            Some(None) => Err(SourceError::Connection {
                station: station.clone(),
                message: "scripted failure".into(),
            }),
            Some(Some(title)) => Ok(Poll::Metadata(StreamMetadata {
                stream_title: title,
                captured_at: at,
                station_id: station.clone(),
            })),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    QuotaReached,
    EndOfScript,
    Unreachable,
    PollLimit,
}

/// Per-station poll bookkeeping. `polls` counts every schedule slot that was
/// either skipped for a blackout or answered by the source.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PollTally {
    pub polls: u64,
    pub accepted: u64,
    pub blackout_skipped: u64,
    pub excluded_empty: u64,
    pub excluded_blacklist: u64,
    pub excluded_duplicate: u64,
    pub failed_attempts: u64,
}

impl PollTally {
    pub fn excluded(&self) -> u64 {
        self.excluded_empty + self.excluded_blacklist + self.excluded_duplicate
    }

    pub fn reconciles(&self) -> bool {
        self.accepted + self.excluded() + self.blackout_skipped == self.polls
    }

    pub fn add(&mut self, other: &PollTally) {
        self.polls += other.polls;
        self.accepted += other.accepted;
        self.blackout_skipped += other.blackout_skipped;
        self.excluded_empty += other.excluded_empty;
        self.excluded_blacklist += other.excluded_blacklist;
        self.excluded_duplicate += other.excluded_duplicate;
        self.failed_attempts += other.failed_attempts;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonitorOutcome {
    pub station_id: StationId,
    pub events: Vec<EventRecord>,
    pub tally: PollTally,
    pub stop: StopReason,
    /// Last connection error when the station became unreachable.
    pub failure: Option<String>,
}

/// Deterministic event id: station plus UTC poll instant.
pub fn event_id_for(station: &StationId, at: DateTime<Utc>) -> EventId {
    EventId(format!("{station}@{}", at.format("%Y%m%dT%H%M%SZ")))
}

/// Polls one station on a fixed cadence starting at `clock.now()` until the
/// quota is met, the source ends, or the station stops answering.
///
/// Slots whose local minute falls in a blackout window are skipped without a
/// request. A payload is rejected when empty, when it contains a blacklist
/// term, or when it repeats the previously accepted description.
pub fn monitor_station(
    station: &StationRecord,
    utc_offset: FixedOffset,
    source: &mut dyn MetadataSource,
    config: &MonitorConfig,
    clock: &mut dyn Clock,
) -> MonitorOutcome {
    let start = clock.now();
    monitor_station_from(station, utc_offset, source, config, clock, start)
}

/// As [`monitor_station`], with the first slot at `start`. Slots the clock has
/// already passed are polled at once, still stamped with their slot time.
pub fn monitor_station_from(
    station: &StationRecord,
    utc_offset: FixedOffset,
    source: &mut dyn MetadataSource,
    config: &MonitorConfig,
    clock: &mut dyn Clock,
    start: DateTime<Utc>,
) -> MonitorOutcome {
    let station_id = station.station_id.clone();
    let interval = TimeDelta::seconds(config.poll_interval_s.max(1) as i64);
    let quota = config.events_per_station as usize;
    let mut tally = PollTally::default();
    let mut events: Vec<EventRecord> = Vec::new();
    let mut failure = None;
    let mut next = start;

    let stop = loop {
        if events.len() >= quota {
            break StopReason::QuotaReached;
        }
        if config.max_polls.is_some_and(|max| tally.polls >= max) {
            break StopReason::PollLimit;
        }
        clock.sleep_until(next);
        let at = next;
        next += interval;

        let local = at.with_timezone(&utc_offset);
        if in_blackout_window(&local, config.blackout_half_width_min) {
            tally.polls += 1;
            tally.blackout_skipped += 1;
            continue;
        }

        let mut answer = None;
        for _ in 0..POLL_ATTEMPTS {
            match source.poll(&station_id, at) {
                Ok(poll) => {
                    answer = Some(poll);
                    break;
                }
                Err(e) => {
                    tally.failed_attempts += 1;
                    failure = Some(e.to_string());
                }
            }
        }
        let metadata = match answer {
            None => break StopReason::Unreachable,
            Some(Poll::EndOfScript) => break StopReason::EndOfScript,
            Some(Poll::Metadata(m)) => m,
        };
        tally.polls += 1;

        let description = metadata.stream_title;
        match is_excluded(&description, &config.blacklist) {
            Some(ExclusionReason::Empty) => tally.excluded_empty += 1,
            Some(ExclusionReason::Blacklist(_)) => tally.excluded_blacklist += 1,
            None if events.last().is_some_and(|e| e.description == description) => tally.excluded_duplicate += 1,
            None => {
                tally.accepted += 1;
                events.push(EventRecord {
                    event_id: event_id_for(&station_id, at),
                    station_id: station_id.clone(),
                    time_at_station: local,
                    description,
                    reliability: None,
                    artist_id: None,
                    track_id: None,
                });
            }
        }
    };

    if stop != StopReason::Unreachable {
        failure = None;
    }
    MonitorOutcome {
        station_id,
        events,
        tally,
        stop,
        failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock::VirtualClock;
    use crate::domain::fixtures::best_fm_station;
    use chrono::TimeZone;

    fn utc8() -> FixedOffset {
        FixedOffset::east_opt(8 * 3600).unwrap()
    }

    /// 09:37 local in UTC+8; the first blackout at 09:55 is 18 minutes away.
    fn clock() -> VirtualClock {
        VirtualClock::new(Utc.with_ymd_and_hms(2022, 12, 28, 1, 37, 0).unwrap())
    }

    fn no_blackout() -> MonitorConfig {
        MonitorConfig {
            blackout_half_width_min: 0,
            ..MonitorConfig::default()
        }
    }

    fn run(source: &mut dyn MetadataSource, config: &MonitorConfig) -> MonitorOutcome {
        monitor_station(&best_fm_station(), utc8(), source, config, &mut clock())
    }

    #[test]
    fn quota_stops_after_first_hundred() {
        let titles: Vec<String> = (0..150).map(|i| format!("Artist {i} - Song {i}")).collect();
        let mut src = ScriptedSource::new(titles.clone());
        let out = run(&mut src, &no_blackout());
        assert_eq!(out.stop, StopReason::QuotaReached);
        let got: Vec<&str> = out.events.iter().map(|e| e.description.as_str()).collect();
        assert_eq!(got, titles[..100].iter().map(String::as_str).collect::<Vec<_>>());
        assert!(out.tally.reconciles());
    }

    #[test]
    fn adverts_and_repeats_collapse() {
        let script: Vec<&str> = (0..20).map(|i| if i % 2 == 0 { "Song A" } else { "advert" }).collect();
        let mut src = ScriptedSource::new(script);
        let out = run(&mut src, &no_blackout());
        // Every later "Song A" repeats the last accepted description.
        assert_eq!(out.events.len(), 1);
        assert_eq!(out.tally.excluded_blacklist, 10);
        assert_eq!(out.tally.excluded_duplicate, 9);
        assert_eq!(out.stop, StopReason::EndOfScript);
        assert!(out.tally.reconciles());
    }

    #[test]
    fn non_consecutive_repeats_are_kept() {
        let mut src = ScriptedSource::new(["A - 1", "B - 2", "A - 1", "A - 1"]);
        let out = run(&mut src, &no_blackout());
        let got: Vec<&str> = out.events.iter().map(|e| e.description.as_str()).collect();
        assert_eq!(got, ["A - 1", "B - 2", "A - 1"]);
    }

    #[test]
    fn only_empty_payloads() {
        let mut src = ScriptedSource::new(vec![""; 30]);
        let out = run(&mut src, &no_blackout());
        assert!(out.events.is_empty());
        assert_eq!(out.tally.excluded_empty, 30);
    }

    #[test]
    fn blackout_slots_are_skipped_without_polling() {
        // 09:37 + k·30 s; minutes 55..60 and 0..5 are skipped.
        let titles: Vec<String> = (0..200).map(|i| format!("T {i}")).collect();
        let mut src = ScriptedSource::new(titles);
        let out = run(&mut src, &MonitorConfig::default());
        assert_eq!(out.events.len(), 100);
        for e in &out.events {
            assert!(!in_blackout_window(&e.time_at_station, 5));
        }
        // 36 slots in 09:37..09:55, 20 skipped to 10:05, 40 accepted to 10:25,
        // 20 skipped to 10:35, then the last 24.
        assert_eq!(out.tally.blackout_skipped, 40);
        assert_eq!(out.events[36].description, "T 36");
        assert_eq!(out.events[36].time_at_station.format("%H:%M").to_string(), "10:05");
        assert!(out.tally.reconciles());
    }

    #[test]
    fn unreachable_returns_partial_results() {
        let mut src = ScriptedSource::with_failures(vec![
            Some("A - 1".into()),
            None,
            Some("B - 2".into()),
            None,
            None,
            None,
            Some("C - 3".into()),
        ]);
        let out = run(&mut src, &no_blackout());
        let got: Vec<&str> = out.events.iter().map(|e| e.description.as_str()).collect();
        assert_eq!(got, ["A - 1", "B - 2"]);
        assert_eq!(out.stop, StopReason::Unreachable);
        assert_eq!(out.tally.failed_attempts, 4);
        assert!(out.failure.is_some());
    }

    #[test]
    fn poll_limit() {
        let mut src = ScriptedSource::new(vec!["advert"; 50]);
        let cfg = MonitorConfig {
            max_polls: Some(10),
            ..no_blackout()
        };
        let out = run(&mut src, &cfg);
        assert_eq!(out.stop, StopReason::PollLimit);
        assert_eq!(out.tally.polls, 10);
    }

    #[test]
    fn event_ids_and_times() {
        let mut src = ScriptedSource::new(["A - 1", "B - 2"]);
        let out = run(&mut src, &no_blackout());
        assert_eq!(out.events[0].event_id.as_str(), "st-best-fm@20221228T013700Z");
        assert_eq!(out.events[1].time_at_station.to_rfc3339(), "2022-12-28T09:37:30+08:00");
    }

    #[test]
    fn late_clock_keeps_slot_times() {
        let mut src = ScriptedSource::new(["A - 1", "B - 2"]);
        let start = clock().now();
        let mut late = clock();
        late.advance(TimeDelta::milliseconds(2500));
        let out = monitor_station_from(&best_fm_station(), utc8(), &mut src, &no_blackout(), &mut late, start);
        assert_eq!(out.events[0].time_at_station, start);
        assert_eq!(out.events[1].time_at_station, start + TimeDelta::seconds(30));
    }

    #[test]
    fn config_validation() {
        assert!(MonitorConfig::default().validate().is_ok());
        let bad = MonitorConfig {
            events_per_station: 0,
            ..Default::default()
        };
        assert_eq!(bad.validate(), Err(ConfigError::Quota));
        let bad = MonitorConfig {
            blacklist: vec!["Advert".into()],
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(ConfigError::BlacklistCase(_))));
        let json = r#"{"events_per_station": 5}"#;
        let cfg: MonitorConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.events_per_station, 5);
        assert_eq!(cfg.poll_interval_s, 30);
    }
}
