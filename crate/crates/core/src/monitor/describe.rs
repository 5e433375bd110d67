use std::fmt;

use serde::{Deserialize, Serialize};

/// Separators tried in priority order when splitting `Artist – Title`.
pub const SEPARATORS: [&str; 3] = [" \u{2013} ", " \u{2014} ", " - "];

pub const DEFAULT_BLACKLIST: [&str; 7] = [
    "advert",
    "advertisement",
    "commercial",
    "unknown",
    "blackout",
    "jingle",
    "station id",
];

pub fn default_blacklist() -> Vec<String> {
    DEFAULT_BLACKLIST.iter().map(|s| s.to_string()).collect()
}

/// Splits a stream description into artist and title guesses at the first
/// occurrence of the highest-priority separator it contains.
pub fn split_description(description: &str) -> (Option<String>, Option<String>) {
    let nonempty = |s: &str| {
        let s = s.trim();
        (!s.is_empty()).then(|| s.to_string())
    };
    SEPARATORS
        .iter()
        .find_map(|sep| description.split_once(sep))
        .map_or((None, None), |(artist, title)| (nonempty(artist), nonempty(title)))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rule", content = "term", rename_all = "snake_case")]
pub enum ExclusionReason {
    Empty,
    Blacklist(String),
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExclusionReason::Empty => f.write_str("empty description"),
            ExclusionReason::Blacklist(term) => write!(f, "blacklist term {term:?}"),
        }
    }
}

/// `Some(reason)` when the description must not become an event.
pub fn is_excluded(description: &str, blacklist: &[String]) -> Option<ExclusionReason> {
    if description.trim().is_empty() {
        return Some(ExclusionReason::Empty);
    }
    let folded = description.to_lowercase();
    blacklist
        .iter()
        .find(|term| !term.is_empty() && folded.contains(term.as_str()))
        .map(|term| ExclusionReason::Blacklist(term.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Option<String> {
        Some(x.to_string())
    }

    #[test]
    fn en_dash() {
        assert_eq!(
            split_description("Aisha Retno \u{2013} Sutera"),
            (s("Aisha Retno"), s("Sutera"))
        );
    }

    #[test]
    fn no_separator() {
        assert_eq!(split_description("MORNING NEWS HOUR"), (None, None));
        assert_eq!(split_description("Artist-Title"), (None, None));
    }

    #[test]
    fn first_occurrence() {
        assert_eq!(
            split_description("AC/DC - Back in Black - Live"),
            (s("AC/DC"), s("Back in Black - Live"))
        );
    }

    #[test]
    fn priority_order() {
        assert_eq!(split_description("A - B \u{2014} C"), (s("A - B"), s("C")));
        assert_eq!(split_description("  A  \u{2013}  B "), (s("A"), s("B")));
    }

    #[test]
    fn exclusion() {
        let bl = default_blacklist();
        assert_eq!(
            is_excluded("ADVERT BREAK 30s", &bl),
            Some(ExclusionReason::Blacklist("advert".into()))
        );
        assert_eq!(is_excluded("Aisha Retno \u{2013} Sutera", &bl), None);
        assert_eq!(is_excluded("   ", &bl), Some(ExclusionReason::Empty));
        assert_eq!(is_excluded("", &bl), Some(ExclusionReason::Empty));
        assert_eq!(
            is_excluded("Your Station ID", &bl),
            Some(ExclusionReason::Blacklist("station id".into()))
        );
        assert_eq!(is_excluded("anything", &[]), None);
    }
}
