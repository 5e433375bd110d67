use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use chrono::{DateTime, FixedOffset, Utc};
use serde::{Deserialize, Serialize};

use super::corpus::EventRow;
use super::error::StoreError;
use crate::analysis::hex_cell_for;
use crate::domain::{EventId, StationId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DateRange {
    pub start: DateTime<FixedOffset>,
    pub end: DateTime<FixedOffset>,
}

/// A cell of the hexagonal station grid, as selected on the globe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexCellRef {
    /// Hexagon edge length in degrees.
    pub resolution: f64,
    pub q: i64,
    pub r: i64,
}

/// Conjunction of optional clauses over joined event rows. Text comparisons
/// ignore case.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EventFilter {
    /// Country name or ISO code of the station's location.
    pub country: Option<String>,
    pub city: Option<String>,
    pub station_id: Option<StationId>,
    /// Substring of the description, artist name or track title.
    pub text_query: Option<String>,
    pub min_reliability: Option<f64>,
    pub date_range: Option<DateRange>,
    /// Station or artist genre.
    pub genre: Option<String>,
    pub artist_country: Option<String>,
    pub hex_cell: Option<HexCellRef>,
}

fn same(a: &str, b: &str) -> bool {
    a.to_lowercase() == b.to_lowercase()
}

impl EventFilter {
    pub fn is_empty(&self) -> bool {
        *self == EventFilter::default()
    }

    pub fn validate(&self) -> Result<(), StoreError> {
        if let Some(r) = &self.date_range {
            if r.start > r.end {
                return Err(StoreError::Filter("date_range start is after end".into()));
            }
        }
        if let Some(m) = self.min_reliability {
            if !(0.0..=1.0).contains(&m) {
                return Err(StoreError::Filter("min_reliability must lie in [0, 1]".into()));
            }
        }
        if let Some(h) = &self.hex_cell {
            if !(h.resolution.is_finite() && h.resolution > 0.0) {
                return Err(StoreError::Filter("hex_cell resolution must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn matches(&self, row: &EventRow) -> bool {
        if let Some(c) = &self.country {
            if !same(c, &row.location.country) && !same(c, &row.location.country_code) {
                return false;
            }
        }
        if let Some(c) = &self.city {
            if !same(c, &row.location.city) {
                return false;
            }
        }
        if let Some(s) = &self.station_id {
            if *s != row.station.station_id {
                return false;
            }
        }
        if let Some(q) = &self.text_query {
            let q = q.to_lowercase();
            let hit = row.event.description.to_lowercase().contains(&q)
                || row.artist.as_ref().is_some_and(|a| a.name.to_lowercase().contains(&q))
                || row.track.as_ref().is_some_and(|t| t.title.to_lowercase().contains(&q));
            if !hit {
                return false;
            }
        }
        if let Some(m) = self.min_reliability {
            if !row.event.reliability.is_some_and(|r| r >= m) {
                return false;
            }
        }
        if let Some(range) = &self.date_range {
            let t = row.event.time_at_station;
            if t < range.start || t > range.end {
                return false;
            }
        }
        if let Some(g) = &self.genre {
            let station_hit = row.station.genres.iter().any(|x| same(x, g));
            let artist_hit = row.artist.as_ref().is_some_and(|a| a.genres.iter().any(|x| same(x, g)));
            if !station_hit && !artist_hit {
                return false;
            }
        }
        if let Some(c) = &self.artist_country {
            if !row
                .artist
                .as_ref()
                .and_then(|a| a.country.as_deref())
                .is_some_and(|x| same(x, c))
            {
                return false;
            }
        }
        if let Some(h) = &self.hex_cell {
            let cell = hex_cell_for(row.location.coordinates, h.resolution);
            if (cell.q, cell.r) != (h.q, h.r) {
                return false;
            }
        }
        true
    }
}

/// Keyset position after the last row of a page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cursor {
    pub time: DateTime<Utc>,
    pub event_id: EventId,
}

impl Cursor {
    pub fn encode(&self) -> String {
        URL_SAFE_NO_PAD.encode(format!("{}|{}", self.time.to_rfc3339(), self.event_id))
    }

    pub fn decode(token: &str) -> Result<Self, StoreError> {
        let bad = || StoreError::Filter(format!("malformed cursor {token:?}"));
        let bytes = URL_SAFE_NO_PAD.decode(token).map_err(|_| bad())?;
        let text = String::from_utf8(bytes).map_err(|_| bad())?;
        let (time, id) = text.split_once('|').ok_or_else(bad)?;
        let time = DateTime::parse_from_rfc3339(time).map_err(|_| bad())?;
        Ok(Self {
            time: time.with_timezone(&Utc),
            event_id: EventId(id.to_string()),
        })
    }
}
