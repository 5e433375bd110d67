use chrono::Datelike;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::candidate::MatchCandidate;
use super::client::{ClientError, LibraryClient};
use super::normalize::normalize_string;
use super::select::{select_match, MatchResult};
use crate::domain::{parse_duration, ArtistId, ArtistRecord, ArtistType, EventId, EventRecord, TrackId, TrackRecord};

/// An event after a completed match attempt, with the records to link.
#[derive(Debug, Clone, PartialEq)]
pub struct Enrichment {
    pub event: EventRecord,
    pub artist: Option<ArtistRecord>,
    pub track: Option<TrackRecord>,
    pub result: MatchResult,
}

/// The library could not be queried; the event stays unscored and can be retried.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("enriching event {event_id}: {source}")]
pub struct EnrichError {
    pub event_id: EventId,
    #[source]
    pub source: ClientError,
}

impl EnrichError {
    pub fn retryable(&self) -> bool {
        true
    }
}

fn short_hash(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn library_tag(c: &MatchCandidate) -> String {
    serde_json::to_value(c.library)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// Builds the artist and track rows described by a chosen candidate. Ids come
/// from the payload when present, otherwise from a hash of the normalized names.
pub fn materialize(candidate: &MatchCandidate) -> (ArtistRecord, TrackRecord) {
    let payload = candidate.typed_payload();
    let lib = library_tag(candidate);
    let artist_norm = normalize_string(&candidate.candidate_artist);
    let title_norm = normalize_string(&candidate.candidate_title);

    let ap = payload.artist;
    let artist = ArtistRecord {
        artist_id: ArtistId(
            ap.as_ref()
                .and_then(|a| a.id.clone())
                .unwrap_or_else(|| format!("ar-{}", short_hash(&[&lib, &artist_norm]))),
        ),
        name: candidate.candidate_artist.clone(),
        artist_type: ap
            .as_ref()
            .and_then(|a| a.artist_type.clone())
            .unwrap_or(ArtistType::MusicalArtist),
        gender: ap.as_ref().and_then(|a| a.gender.clone()),
        country: ap.as_ref().and_then(|a| a.country.clone()),
        genres: ap.as_ref().map(|a| a.genres.clone()).unwrap_or_default(),
        instruments: ap.as_ref().map(|a| a.instruments.clone()).unwrap_or_default(),
        members: ap.as_ref().and_then(|a| a.members.clone()),
    };

    let tp = payload.track;
    let date = candidate.release_date.map(|d| d.to_string()).unwrap_or_default();
    let track = TrackRecord {
        track_id: TrackId(
            tp.as_ref()
                .and_then(|t| t.id.clone())
                .unwrap_or_else(|| format!("tr-{}", short_hash(&[&lib, &artist_norm, &title_norm, &date]))),
        ),
        title: candidate.candidate_title.clone(),
        duration_s: tp.as_ref().and_then(|t| {
            t.duration_s
                .or_else(|| t.duration.as_deref().and_then(|d| parse_duration(d).ok()))
        }),
        year_released: tp
            .as_ref()
            .and_then(|t| t.year_released)
            .or_else(|| candidate.release_date.map(|d| d.year())),
        key_mode: tp.as_ref().and_then(|t| t.key_mode.clone()),
        language: tp.as_ref().and_then(|t| t.language.clone()),
        features: tp.as_ref().and_then(|t| t.features),
        popularity: tp.as_ref().and_then(|t| t.popularity),
        listen_links: tp.map(|t| t.listen_links).unwrap_or_default(),
    };
    (artist, track)
}

/// Queries the library with the event's description, scores the hits and
/// links the best one. The best hit is linked whatever its score; the
/// reliability recorded on the event says how trustworthy the link is.
pub fn enrich_event(event: &EventRecord, client: &dyn LibraryClient) -> Result<Enrichment, EnrichError> {
    let candidates = client.search(&event.description).map_err(|source| EnrichError {
        event_id: event.event_id.clone(),
        source,
    })?;
    let result = select_match(&event.description, &candidates, 0.0);
    let mut event = event.clone();
    event.reliability = Some(result.reliability);
    let (artist, track) = match &result.chosen {
        Some(c) => {
            let (a, t) = materialize(c);
            event.artist_id = Some(a.artist_id.clone());
            event.track_id = Some(t.track_id.clone());
            (Some(a), Some(t))
        }
        None => {
            event.artist_id = None;
            event.track_id = None;
            (None, None)
        }
    };
    Ok(Enrichment {
        event,
        artist,
        track,
        result,
    })
}
