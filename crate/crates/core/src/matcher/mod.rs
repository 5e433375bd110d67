//! Library matching: string canonicalization, normalized edit-distance
//! similarity, candidate selection and event enrichment.

mod candidate;
mod client;
mod enrich;
mod normalize;
mod select;
mod similarity;

pub use candidate::{ArtistPayload, CandidatePayload, Library, MatchCandidate, TrackPayload};
pub use client::{ClientError, FixtureClient, FixtureError, LibraryClient};
pub use enrich::{enrich_event, materialize, EnrichError, Enrichment};
pub use normalize::normalize_string;
pub use select::{is_reliable, score_candidate, select_match, MatchResult, RELIABLE_THRESHOLD, SCORE_TIE_TOLERANCE};
pub use similarity::{levenshtein, normalized_similarity};
