use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use anyhow::{bail, Result};
use radiometa_core::domain::{EventId, Record};
use radiometa_core::matcher::{enrich_event, EnrichError, Enrichment, FixtureClient, LibraryClient};
use radiometa_core::store::Store;
use radiometa_net::HttpLibraryClient;
use serde::{Deserialize, Serialize};

use crate::config::{LibraryClientConfig, PipelineConfig};
use crate::lock::CorpusLock;
use crate::Outcome;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnrichReport {
    /// Events without a reliability score before this run.
    pub pending: usize,
    pub processed: usize,
    pub matched: usize,
    pub unmatched: usize,
    /// Library failures; these events stay unscored for a later run.
    pub failed: usize,
    pub failed_events: Vec<EventId>,
    pub threshold: f64,
    /// Events matched in this run at or above the threshold.
    pub reliable: usize,
    /// Events still unscored after this run.
    pub remaining: usize,
    pub corpus_reliable: usize,
    pub corpus_events: usize,
}

impl EnrichReport {
    pub fn outcome(&self) -> Outcome {
        if self.remaining == 0 {
            Outcome::Complete
        } else {
            Outcome::Partial
        }
    }
}

pub fn library_client(cfg: &LibraryClientConfig) -> Result<Arc<dyn LibraryClient>> {
    Ok(match cfg {
        LibraryClientConfig::Fixture(path) => Arc::new(FixtureClient::from_path(path)?),
        LibraryClientConfig::Http(url) => Arc::new(HttpLibraryClient::new(url)),
    })
}

/// Scores every unscored event against the library, at most `limit` of them.
/// Events already scored are never revisited, so a rerun after success does
/// nothing.
pub fn cmd_enrich(cfg: &PipelineConfig, limit: Option<usize>) -> Result<EnrichReport> {
    cfg.validate()?;
    let Some(client_cfg) = &cfg.library_client else {
        bail!("enrich needs library_client in the config");
    };
    let client = library_client(client_cfg)?;
    let _lock = CorpusLock::acquire(&cfg.corpus_path)?;
    let store = Store::open(&cfg.corpus_path)?;
    let snapshot = store.snapshot();
    let pending: Vec<_> = snapshot.events().filter(|e| e.reliability.is_none()).cloned().collect();
    let batch: Vec<_> = pending.iter().take(limit.unwrap_or(usize::MAX)).collect();

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, Result<Enrichment, EnrichError>)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..cfg.workers.min(batch.len()).max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(e) = batch.get(i) else { break };
                let r = enrich_event(e, client.as_ref());
                results.lock().unwrap().push((i, r));
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|(i, _)| *i);

    let mut report = EnrichReport {
        pending: pending.len(),
        processed: batch.len(),
        matched: 0,
        unmatched: 0,
        failed: 0,
        failed_events: Vec::new(),
        threshold: cfg.match_threshold,
        reliable: 0,
        remaining: 0,
        corpus_reliable: 0,
        corpus_events: 0,
    };
    let mut records: Vec<Record> = Vec::new();
    for (_, r) in results {
        match r {
            Ok(en) => {
                if en.result.chosen.is_some() {
                    report.matched += 1;
                } else {
                    report.unmatched += 1;
                }
                if en.result.reliability >= cfg.match_threshold {
                    report.reliable += 1;
                }
                records.extend(en.artist.map(Record::from));
                records.extend(en.track.map(Record::from));
                records.push(en.event.into());
            }
            Err(e) => {
                report.failed += 1;
                report.failed_events.push(e.event_id);
            }
        }
    }
    // Artists and tracks first so events never dangle within the batch.
    records.sort_by_key(|r| matches!(r, Record::Event(_)));
    for chunk in records.chunks(2000) {
        store.commit(chunk.to_vec())?;
    }
    let after = store.snapshot();
    report.remaining = after.events().filter(|e| e.reliability.is_none()).count();
    report.corpus_events = after.counts().events;
    report.corpus_reliable = after
        .events()
        .filter(|e| e.reliability.is_some_and(|r| r >= cfg.match_threshold))
        .count();
    Ok(report)
}
