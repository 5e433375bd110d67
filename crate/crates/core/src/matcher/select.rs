use serde::{Deserialize, Serialize};

use super::candidate::MatchCandidate;
use super::normalize::normalize_string;
use super::similarity::normalized_similarity;

/// Scores within this distance of the best score count as tied.
pub const SCORE_TIE_TOLERANCE: f64 = 1e-9;

pub const RELIABLE_THRESHOLD: f64 = 0.90;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub chosen: Option<MatchCandidate>,
    pub reliability: f64,
    pub considered: usize,
}

impl MatchResult {
    pub fn none(considered: usize) -> Self {
        Self {
            chosen: None,
            reliability: 0.0,
            considered,
        }
    }
}

/// Similarity between a raw description and a candidate's `artist - title`.
pub fn score_candidate(normalized_description: &str, candidate: &MatchCandidate) -> f64 {
    normalized_similarity(normalized_description, &normalize_string(&candidate.match_string()))
}

/// Picks the best-scoring candidate; ties go to the oldest release.
///
/// Candidates scoring below `min_score` are not eligible. With `min_score = 0`
/// every candidate is eligible, so nothing is chosen only for an empty list.
pub fn select_match(description: &str, candidates: &[MatchCandidate], min_score: f64) -> MatchResult {
    let description = normalize_string(description);
    let scored: Vec<(f64, &MatchCandidate)> = candidates
        .iter()
        .map(|c| (score_candidate(&description, c), c))
        .filter(|(s, _)| *s >= min_score)
        .collect();
    let Some(best) = scored.iter().map(|(s, _)| *s).reduce(f64::max) else {
        return MatchResult::none(candidates.len());
    };
    let chosen = scored
        .iter()
        .filter(|(s, _)| best - s <= SCORE_TIE_TOLERANCE)
        .map(|(_, c)| *c)
        .min_by(|a, b| a.tie_break(b))
        .cloned();
    MatchResult {
        chosen,
        reliability: best,
        considered: candidates.len(),
    }
}

/// Whether a match clears the reliable-subset threshold (inclusive).
pub fn is_reliable(result: &MatchResult, threshold: f64) -> bool {
    result.reliability >= threshold
}
