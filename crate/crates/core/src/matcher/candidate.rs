use std::cmp::Ordering;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::domain::{ArtistType, AudioFeatures, GroupMember, KeyMode, ListenLink};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Library {
    LibA,
    LibB,
    Fixture,
}

/// One search hit from a music library.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchCandidate {
    pub library: Library,
    pub candidate_artist: String,
    pub candidate_title: String,
    pub release_date: Option<NaiveDate>,
    /// Enrichment fields, see [`CandidatePayload`]. Kept opaque so that
    /// library-specific extras survive storage untouched.
    #[serde(default)]
    pub payload: serde_json::Value,
}

impl MatchCandidate {
    pub fn new(library: Library, artist: &str, title: &str, release_date: Option<NaiveDate>) -> Self {
        Self {
            library,
            candidate_artist: artist.to_string(),
            candidate_title: title.to_string(),
            release_date,
            payload: serde_json::Value::Null,
        }
    }

    /// The string compared with an event description.
    pub fn match_string(&self) -> String {
        format!("{} - {}", self.candidate_artist, self.candidate_title)
    }

    /// Decoded payload; malformed or absent payloads decode as empty.
    pub fn typed_payload(&self) -> CandidatePayload {
        serde_json::from_value(self.payload.clone()).unwrap_or_default()
    }

    /// Tie-break order among equally scored candidates: oldest release first
    /// (undated last), then title, then artist, then library and payload so the
    /// order is total.
    pub(crate) fn tie_break(&self, other: &Self) -> Ordering {
        let date = match (self.release_date, other.release_date) {
            (Some(a), Some(b)) => a.cmp(&b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        date.then_with(|| self.candidate_title.cmp(&other.candidate_title))
            .then_with(|| self.candidate_artist.cmp(&other.candidate_artist))
            .then_with(|| self.library.cmp(&other.library))
            .then_with(|| self.payload.to_string().cmp(&other.payload.to_string()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CandidatePayload {
    pub artist: Option<ArtistPayload>,
    pub track: Option<TrackPayload>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtistPayload {
    pub id: Option<String>,
    pub artist_type: Option<ArtistType>,
    pub gender: Option<String>,
    pub country: Option<String>,
    #[serde(default)]
    pub genres: Vec<String>,
    #[serde(default)]
    pub instruments: Vec<String>,
    pub members: Option<Vec<GroupMember>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackPayload {
    pub id: Option<String>,
    pub duration_s: Option<u32>,
    /// `MM:SS` or `H:MM:SS`, used when `duration_s` is absent.
    pub duration: Option<String>,
    pub year_released: Option<i32>,
    pub key_mode: Option<KeyMode>,
    pub language: Option<String>,
    pub features: Option<AudioFeatures>,
    pub popularity: Option<f64>,
    #[serde(default)]
    pub listen_links: Vec<ListenLink>,
}
