use std::collections::HashSet;
use std::fs;
use std::path::Path;

use thiserror::Error;

use super::candidate::MatchCandidate;
use super::normalize::normalize_string;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClientError {
    #[error("library request timed out")]
    Timeout,
    #[error("library unavailable: {0}")]
    Unavailable(String),
    #[error("library response could not be decoded: {0}")]
    Decode(String),
}

/// A searchable music library. Implementations must tolerate concurrent calls.
pub trait LibraryClient: Send + Sync {
    fn search(&self, query: &str) -> Result<Vec<MatchCandidate>, ClientError>;
}

impl<T: LibraryClient + ?Sized> LibraryClient for std::sync::Arc<T> {
    fn search(&self, query: &str) -> Result<Vec<MatchCandidate>, ClientError> {
        (**self).search(query)
    }
}

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("reading fixture {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parsing fixture {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

/// Offline library backed by JSON arrays of [`MatchCandidate`].
///
/// Search returns catalog entries sharing at least one normalized word with the
/// query, most shared words first, capped at [`FixtureClient::MAX_RESULTS`].
#[derive(Debug, Clone, Default)]
pub struct FixtureClient {
    catalog: Vec<(MatchCandidate, HashSet<String>)>,
}

fn words(s: &str) -> HashSet<String> {
    normalize_string(s)
        .split(|c: char| c.is_whitespace() || c == '-')
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect()
}

impl FixtureClient {
    pub const MAX_RESULTS: usize = 50;

    pub fn new(candidates: Vec<MatchCandidate>) -> Self {
        Self {
            catalog: candidates
                .into_iter()
                .map(|c| {
                    let w = words(&c.match_string());
                    (c, w)
                })
                .collect(),
        }
    }

    /// Loads one JSON file, or every `*.json` file of a directory in name order.
    pub fn from_path(path: &Path) -> Result<Self, FixtureError> {
        let io = |e| FixtureError::Io {
            path: path.display().to_string(),
            source: e,
        };
        let mut files = Vec::new();
        if path.is_dir() {
            for entry in fs::read_dir(path).map_err(io)? {
                let p = entry.map_err(io)?.path();
                if p.extension().is_some_and(|e| e == "json") {
                    files.push(p);
                }
            }
            files.sort();
        } else {
            files.push(path.to_path_buf());
        }
        let mut all = Vec::new();
        for file in files {
            let text = fs::read_to_string(&file).map_err(|e| FixtureError::Io {
                path: file.display().to_string(),
                source: e,
            })?;
            let mut batch: Vec<MatchCandidate> = serde_json::from_str(&text).map_err(|e| FixtureError::Json {
                path: file.display().to_string(),
                source: e,
            })?;
            all.append(&mut batch);
        }
        Ok(Self::new(all))
    }

    pub fn len(&self) -> usize {
        self.catalog.len()
    }

    pub fn is_empty(&self) -> bool {
        self.catalog.is_empty()
    }

    pub fn candidates(&self) -> impl Iterator<Item = &MatchCandidate> {
        self.catalog.iter().map(|(c, _)| c)
    }
}

impl LibraryClient for FixtureClient {
    fn search(&self, query: &str) -> Result<Vec<MatchCandidate>, ClientError> {
        let q = words(query);
        let mut hits: Vec<(usize, usize)> = self
            .catalog
            .iter()
            .enumerate()
            .map(|(i, (_, w))| (w.intersection(&q).count(), i))
            .filter(|(shared, _)| *shared > 0)
            .collect();
        hits.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        Ok(hits
            .into_iter()
            .take(Self::MAX_RESULTS)
            .map(|(_, i)| self.catalog[i].0.clone())
            .collect())
    }
}
