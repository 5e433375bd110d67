use chrono::{DateTime, FixedOffset};
use serde::{Deserialize, Serialize};

use crate::domain::*;
use crate::matcher::RELIABLE_THRESHOLD;
use crate::store::{Corpus, StoreError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationSection {
    pub station_id: StationId,
    pub name: String,
    pub form: String,
    pub formats: Vec<String>,
    pub genres: Vec<String>,
    /// Rendered as a hyperlink.
    pub website: Option<String>,
    pub city: String,
    pub country: String,
    pub continent: String,
    pub coordinates: Coordinates,
    pub review_status: ReviewStatus,
    pub reliability_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventSection {
    pub event_id: EventId,
    pub description: String,
    pub time_at_station: DateTime<FixedOffset>,
    pub reliability: Option<f64>,
    pub reliable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtistSection {
    pub artist_id: ArtistId,
    pub name: String,
    pub artist_type: String,
    pub gender: Option<String>,
    pub country: Option<String>,
    pub genres: Vec<String>,
    pub instruments: Vec<String>,
    pub members: Option<Vec<GroupMember>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackSection {
    pub track_id: TrackId,
    pub title: String,
    pub duration: Option<String>,
    pub year_released: Option<i32>,
    pub key: Option<String>,
    pub language: Option<String>,
    pub features: Option<AudioFeatures>,
    pub popularity: Option<f64>,
}

/// The four panel sections plus external listen links.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventDetail {
    pub station: StationSection,
    pub event: EventSection,
    pub artist: Option<ArtistSection>,
    pub track: Option<TrackSection>,
    pub listen_links: Vec<ListenLink>,
}

pub fn event_detail(corpus: &Corpus, event_id: &EventId) -> Result<EventDetail, StoreError> {
    let row = corpus.event_row(event_id).ok_or_else(|| StoreError::NotFound {
        table: "event",
        id: event_id.to_string(),
    })?;
    let s = &row.station;
    let l = &row.location;
    Ok(EventDetail {
        station: StationSection {
            station_id: s.station_id.clone(),
            name: s.name.clone(),
            form: s.form.to_string(),
            formats: s.formats.clone(),
            genres: s.genres.clone(),
            website: s.website.clone(),
            city: l.city.clone(),
            country: l.country.clone(),
            continent: l.continent.label().to_string(),
            coordinates: l.coordinates,
            review_status: s.review_status,
            reliability_pct: s.reliability_pct,
        },
        event: EventSection {
            event_id: row.event.event_id.clone(),
            description: row.event.description.clone(),
            time_at_station: row.event.time_at_station,
            reliability: row.event.reliability,
            reliable: row.event.reliability.is_some_and(|r| r >= RELIABLE_THRESHOLD),
        },
        artist: row.artist.as_ref().map(|a| ArtistSection {
            artist_id: a.artist_id.clone(),
            name: a.name.clone(),
            artist_type: a.artist_type.to_string(),
            gender: a.gender.clone(),
            country: a.country.clone(),
            genres: a.genres.clone(),
            instruments: a.instruments.clone(),
            members: a.members.clone(),
        }),
        track: row.track.as_ref().map(|t| TrackSection {
            track_id: t.track_id.clone(),
            title: t.title.clone(),
            duration: t.duration_s.map(format_duration),
            year_released: t.year_released,
            key: t.key_mode.as_ref().map(|k| k.to_string()),
            language: t.language.clone(),
            features: t.features,
            popularity: t.popularity,
        }),
        listen_links: row.track.map(|t| t.listen_links).unwrap_or_default(),
    })
}
