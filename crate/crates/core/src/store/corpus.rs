use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::error::StoreError;
use super::filter::{Cursor, EventFilter};
use super::review::ReviewEntry;
use crate::domain::*;

/// Newest first, ties by ascending event id.
pub(crate) type TimeKey = (Reverse<DateTime<Utc>>, EventId);

fn time_key(e: &EventRecord) -> TimeKey {
    (Reverse(e.time_at_station.with_timezone(&Utc)), e.event_id.clone())
}

/// Reliabilities are nonnegative, so their IEEE bit patterns sort numerically.
fn reliability_key(r: f64) -> u64 {
    (r + 0.0).to_bits()
}

/// An event joined with its station, location and optional artist and track.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRow {
    pub event: EventRecord,
    pub station: StationRecord,
    pub location: LocationRecord,
    pub artist: Option<ArtistRecord>,
    pub track: Option<TrackRecord>,
}

impl EventRow {
    pub fn utc(&self) -> DateTime<Utc> {
        self.event.time_at_station.with_timezone(&Utc)
    }
}

/// The five tables plus their secondary indexes and the review log.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub(crate) locations: BTreeMap<LocationId, LocationRecord>,
    pub(crate) stations: BTreeMap<StationId, StationRecord>,
    pub(crate) events: BTreeMap<EventId, EventRecord>,
    pub(crate) artists: BTreeMap<ArtistId, ArtistRecord>,
    pub(crate) tracks: BTreeMap<TrackId, TrackRecord>,
    pub(crate) reviews: Vec<ReviewEntry>,
    by_time: BTreeSet<TimeKey>,
    station_events: HashMap<StationId, BTreeSet<TimeKey>>,
    location_stations: HashMap<LocationId, BTreeSet<StationId>>,
    by_reliability: BTreeSet<(u64, EventId)>,
}

impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        self.locations == other.locations
            && self.stations == other.stations
            && self.events == other.events
            && self.artists == other.artists
            && self.tracks == other.tracks
            && self.reviews == other.reviews
    }
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces a record after validation and reference checks.
    pub fn upsert(&mut self, record: Record) -> Result<String, StoreError> {
        let violations = validate_record(&record);
        if !violations.is_empty() {
            return Err(StoreError::Invalid {
                table: record.table(),
                id: record.id().to_string(),
                violations,
            });
        }
        self.check_references(&record)?;
        let id = record.id().to_string();
        match record {
            Record::Location(r) => {
                self.locations.insert(r.location_id.clone(), r);
            }
            Record::Station(r) => self.put_station(r),
            Record::Event(r) => self.put_event(r),
            Record::Artist(r) => {
                self.artists.insert(r.artist_id.clone(), r);
            }
            Record::Track(r) => {
                self.tracks.insert(r.track_id.clone(), r);
            }
        }
        Ok(id)
    }

    /// Applies records in order; when any record fails validation or
    /// references something absent from both the corpus and the earlier part of
    /// the batch, nothing is applied.
    pub fn upsert_batch(&mut self, records: Vec<Record>) -> Result<usize, StoreError> {
        self.check_batch(&records)?;
        let n = records.len();
        for r in records {
            self.upsert(r)?;
        }
        Ok(n)
    }

    /// Dry run of [`Corpus::upsert_batch`].
    pub fn check_batch(&self, records: &[Record]) -> Result<(), StoreError> {
        let mut pending = Corpus::new();
        for r in records {
            let violations = validate_record(r);
            if !violations.is_empty() {
                return Err(StoreError::Invalid {
                    table: r.table(),
                    id: r.id().to_string(),
                    violations,
                });
            }
            self.check_references_with(r, Some(&pending))?;
            match r {
                Record::Location(x) => {
                    pending.locations.insert(x.location_id.clone(), x.clone());
                }
                Record::Station(x) => {
                    pending.stations.insert(x.station_id.clone(), x.clone());
                }
                Record::Artist(x) => {
                    pending.artists.insert(x.artist_id.clone(), x.clone());
                }
                Record::Track(x) => {
                    pending.tracks.insert(x.track_id.clone(), x.clone());
                }
                Record::Event(_) => {}
            }
        }
        Ok(())
    }

    fn check_references(&self, record: &Record) -> Result<(), StoreError> {
        self.check_references_with(record, None)
    }

    fn check_references_with(&self, record: &Record, staged: Option<&Corpus>) -> Result<(), StoreError> {
        let missing = |table: &'static str, id: &str| StoreError::DanglingReference {
            table,
            id: id.to_string(),
        };
        match record {
            Record::Station(s)
                if !self.locations.contains_key(&s.location_id)
                    && !staged.is_some_and(|p| p.locations.contains_key(&s.location_id)) =>
            {
                Err(missing("location", s.location_id.as_str()))
            }
            Record::Event(e) => {
                let has_station = |c: &Corpus| c.stations.contains_key(&e.station_id);
                let has_artist = |c: &Corpus, a: &ArtistId| c.artists.contains_key(a);
                let has_track = |c: &Corpus, t: &TrackId| c.tracks.contains_key(t);
                if !has_station(self) && !staged.is_some_and(has_station) {
                    return Err(missing("station", e.station_id.as_str()));
                }
                if let Some(a) = e
                    .artist_id
                    .as_ref()
                    .filter(|a| !has_artist(self, a) && !staged.is_some_and(|p| has_artist(p, a)))
                {
                    return Err(missing("artist", a.as_str()));
                }
                if let Some(t) = e
                    .track_id
                    .as_ref()
                    .filter(|t| !has_track(self, t) && !staged.is_some_and(|p| has_track(p, t)))
                {
                    return Err(missing("track", t.as_str()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn put_station(&mut self, r: StationRecord) {
        if let Some(old) = self.stations.get(&r.station_id) {
            if let Some(set) = self.location_stations.get_mut(&old.location_id) {
                set.remove(&old.station_id);
            }
        }
        self.location_stations
            .entry(r.location_id.clone())
            .or_default()
            .insert(r.station_id.clone());
        self.stations.insert(r.station_id.clone(), r);
    }

    fn put_event(&mut self, r: EventRecord) {
        if let Some(old) = self.events.remove(&r.event_id) {
            let key = time_key(&old);
            self.by_time.remove(&key);
            if let Some(set) = self.station_events.get_mut(&old.station_id) {
                set.remove(&key);
            }
            if let Some(rel) = old.reliability {
                self.by_reliability
                    .remove(&(reliability_key(rel), old.event_id.clone()));
            }
        }
        let key = time_key(&r);
        self.by_time.insert(key.clone());
        self.station_events.entry(r.station_id.clone()).or_default().insert(key);
        if let Some(rel) = r.reliability {
            self.by_reliability.insert((reliability_key(rel), r.event_id.clone()));
        }
        self.events.insert(r.event_id.clone(), r);
    }

    pub(crate) fn push_review(&mut self, entry: ReviewEntry) {
        self.reviews.push(entry);
    }

    pub fn location(&self, id: &LocationId) -> Option<&LocationRecord> {
        self.locations.get(id)
    }

    pub fn station(&self, id: &StationId) -> Option<&StationRecord> {
        self.stations.get(id)
    }

    pub fn event(&self, id: &EventId) -> Option<&EventRecord> {
        self.events.get(id)
    }

    pub fn artist(&self, id: &ArtistId) -> Option<&ArtistRecord> {
        self.artists.get(id)
    }

    pub fn track(&self, id: &TrackId) -> Option<&TrackRecord> {
        self.tracks.get(id)
    }

    pub fn locations(&self) -> impl Iterator<Item = &LocationRecord> {
        self.locations.values()
    }

    pub fn stations(&self) -> impl Iterator<Item = &StationRecord> {
        self.stations.values()
    }

    pub fn events(&self) -> impl Iterator<Item = &EventRecord> {
        self.events.values()
    }

    pub fn artists(&self) -> impl Iterator<Item = &ArtistRecord> {
        self.artists.values()
    }

    pub fn tracks(&self) -> impl Iterator<Item = &TrackRecord> {
        self.tracks.values()
    }

    pub fn reviews(&self) -> &[ReviewEntry] {
        &self.reviews
    }

    pub fn counts(&self) -> TableCounts {
        TableCounts {
            locations: self.locations.len(),
            stations: self.stations.len(),
            events: self.events.len(),
            artists: self.artists.len(),
            tracks: self.tracks.len(),
        }
    }

    /// A station's events, newest first.
    pub fn station_events(&self, id: &StationId) -> Vec<&EventRecord> {
        self.station_events
            .get(id)
            .into_iter()
            .flatten()
            .map(|(_, eid)| &self.events[eid])
            .collect()
    }

    pub fn stations_at(&self, id: &LocationId) -> Vec<&StationRecord> {
        self.location_stations
            .get(id)
            .into_iter()
            .flatten()
            .map(|sid| &self.stations[sid])
            .collect()
    }

    pub fn join(&self, event: &EventRecord) -> Option<EventRow> {
        let station = self.stations.get(&event.station_id)?;
        let location = self.locations.get(&station.location_id)?;
        Some(EventRow {
            event: event.clone(),
            station: station.clone(),
            location: location.clone(),
            artist: event.artist_id.as_ref().and_then(|a| self.artists.get(a)).cloned(),
            track: event.track_id.as_ref().and_then(|t| self.tracks.get(t)).cloned(),
        })
    }

    pub fn event_row(&self, id: &EventId) -> Option<EventRow> {
        self.join(self.events.get(id)?)
    }

    /// Most recent matching rows, at most `limit`.
    pub fn query_events(&self, filter: &EventFilter, limit: usize) -> Vec<EventRow> {
        self.query_page(filter, limit, None).0
    }

    /// One page of matching rows strictly after `cursor`, newest first, plus
    /// the cursor of the next page when more rows may follow.
    pub fn query_page(
        &self,
        filter: &EventFilter,
        limit: usize,
        cursor: Option<&Cursor>,
    ) -> (Vec<EventRow>, Option<Cursor>) {
        let limit = limit.max(1);
        let keys: Box<dyn Iterator<Item = &TimeKey>> = match &filter.station_id {
            Some(sid) => match self.station_events.get(sid) {
                Some(set) => Box::new(set.iter()),
                None => Box::new(std::iter::empty()),
            },
            None => Box::new(self.by_time.iter()),
        };
        let after = cursor.map(|c| (Reverse(c.time), c.event_id.clone()));
        let mut rows = Vec::new();
        for key in keys {
            if after.as_ref().is_some_and(|a| key <= a) {
                continue;
            }
            let Some(row) = self.join(&self.events[&key.1]) else {
                continue;
            };
            if filter.matches(&row) {
                if rows.len() == limit {
                    let last: &EventRow = &rows[limit - 1];
                    let next = Cursor {
                        time: last.utc(),
                        event_id: last.event.event_id.clone(),
                    };
                    return (rows, Some(next));
                }
                rows.push(row);
            }
        }
        (rows, None)
    }

    /// Events with reliability at or above `threshold`, plus every station,
    /// location, artist and track they reference.
    pub fn reliable_subset(&self, threshold: f64) -> Corpus {
        let mut out = Corpus::new();
        let lower = (reliability_key(threshold.max(0.0)), EventId(String::new()));
        for (_, eid) in self.by_reliability.range(lower..) {
            let e = &self.events[eid];
            let station = &self.stations[&e.station_id];
            let location = &self.locations[&station.location_id];
            out.locations
                .entry(location.location_id.clone())
                .or_insert_with(|| location.clone());
            if !out.stations.contains_key(&station.station_id) {
                out.put_station(station.clone());
            }
            if let Some(a) = &e.artist_id {
                out.artists.insert(a.clone(), self.artists[a].clone());
            }
            if let Some(t) = &e.track_id {
                out.tracks.insert(t.clone(), self.tracks[t].clone());
            }
            out.put_event(e.clone());
        }
        out
    }

    /// Every record in dependency order (locations first, events last).
    pub fn records(&self) -> Vec<Record> {
        self.locations
            .values()
            .cloned()
            .map(Record::from)
            .chain(self.stations.values().cloned().map(Record::from))
            .chain(self.artists.values().cloned().map(Record::from))
            .chain(self.tracks.values().cloned().map(Record::from))
            .chain(self.events.values().cloned().map(Record::from))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCounts {
    pub locations: usize,
    pub stations: usize,
    pub events: usize,
    pub artists: usize,
    pub tracks: usize,
}
