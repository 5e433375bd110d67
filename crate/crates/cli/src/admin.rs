use std::collections::BTreeMap;
use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use chrono::Utc;
use radiometa_core::analysis::{columns, export_csv, import_csv, ColumnSet};
use radiometa_core::domain::{Record, StationId, StationRecord};
use radiometa_core::store::{EventFilter, StationEdits, Store};
use radiometa_net::{serve_api, ServerHandle};
use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::lock::CorpusLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExportScope {
    Full,
    Reliable,
    PublicDomain,
}

impl FromStr for ExportScope {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "full" => ExportScope::Full,
            "reliable" => ExportScope::Reliable,
            "public-domain" | "public_domain" => ExportScope::PublicDomain,
            _ => bail!("unknown export scope {s:?} (full, reliable, public-domain)"),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewReport {
    pub station: StationRecord,
    pub reliability_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportReport {
    pub scope: ExportScope,
    pub rows: usize,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportReport {
    pub rows: usize,
    pub records_written: usize,
}

/// Applies reviewer edits, then optionally recomputes the station's share
/// of reliable events.
pub fn cmd_review(
    cfg: &PipelineConfig,
    station_id: &StationId,
    edits: &StationEdits,
    compute_reliability: bool,
) -> Result<ReviewReport> {
    cfg.validate()?;
    let _lock = CorpusLock::acquire(&cfg.corpus_path)?;
    let store = Store::open(&cfg.corpus_path)?;
    let mut station = store.review_station(station_id, edits, Utc::now())?;
    let mut reliability_pct = None;
    if compute_reliability {
        reliability_pct = Some(store.compute_station_reliability(station_id, cfg.match_threshold, Utc::now())?);
        station = store.snapshot().station(station_id).cloned().expect("just reviewed");
    }
    Ok(ReviewReport {
        station,
        reliability_pct,
    })
}

/// Writes matching rows as CSV. `Reliable` keeps events at or above the
/// configured threshold.
pub fn cmd_export(cfg: &PipelineConfig, scope: ExportScope, filter: &EventFilter, out: &Path) -> Result<ExportReport> {
    cfg.validate()?;
    filter.validate()?;
    if !cfg.corpus_path.is_dir() {
        bail!("no corpus at {}", cfg.corpus_path.display());
    }
    let corpus = Store::open(&cfg.corpus_path)?.snapshot();
    let (rows, set) = match scope {
        ExportScope::Full => (corpus.query_events(filter, usize::MAX), ColumnSet::Full),
        ExportScope::Reliable => (
            corpus
                .reliable_subset(cfg.match_threshold)
                .query_events(filter, usize::MAX),
            ColumnSet::Full,
        ),
        ExportScope::PublicDomain => (corpus.query_events(filter, usize::MAX), ColumnSet::PublicDomain),
    };
    let tmp = out.with_extension("csv.tmp");
    fs::write(&tmp, export_csv(&rows, set)).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, out).with_context(|| format!("writing {}", out.display()))?;
    Ok(ExportReport {
        scope,
        rows: rows.len(),
        path: out.to_path_buf(),
    })
}

/// Loads a full-column CSV export into the corpus, overwriting records with
/// the same ids. Partial exports are refused, since importing one would blank
/// the missing fields.
pub fn cmd_import(cfg: &PipelineConfig, csv: &Path) -> Result<ImportReport> {
    cfg.validate()?;
    let bytes = fs::read(csv).with_context(|| format!("reading {}", csv.display()))?;
    let header = bytes.split(|b| *b == b'\n').next().unwrap_or_default();
    let header = String::from_utf8_lossy(header);
    let present: Vec<&str> = header.trim_end().split(',').collect();
    let missing: Vec<&str> = columns(ColumnSet::Full)
        .iter()
        .map(|c| c.name)
        .filter(|n| !present.contains(n))
        .collect();
    if !missing.is_empty() {
        bail!(
            "{} is not a full export; missing columns: {}",
            csv.display(),
            missing.join(", ")
        );
    }
    let rows = import_csv(&bytes)?;
    let mut records: BTreeMap<(u8, String), Record> = BTreeMap::new();
    for row in &rows {
        let mut put = |rank: u8, id: &str, r: Record| {
            records.insert((rank, id.to_string()), r);
        };
        put(0, &row.location.location_id.0, row.location.clone().into());
        put(1, &row.station.station_id.0, row.station.clone().into());
        if let Some(a) = &row.artist {
            put(2, &a.artist_id.0, a.clone().into());
        }
        if let Some(t) = &row.track {
            put(3, &t.track_id.0, t.clone().into());
        }
        put(4, &row.event.event_id.0, row.event.clone().into());
    }
    let _lock = CorpusLock::acquire(&cfg.corpus_path)?;
    let store = Store::open(&cfg.corpus_path)?;
    let records_written = store.commit(records.into_values().collect())?;
    Ok(ImportReport {
        rows: rows.len(),
        records_written,
    })
}

/// Folds the write-ahead log into the table files.
pub fn cmd_checkpoint(cfg: &PipelineConfig) -> Result<()> {
    let _lock = CorpusLock::acquire(&cfg.corpus_path)?;
    Store::open(&cfg.corpus_path)?.checkpoint()?;
    Ok(())
}

/// The query API over the corpus. The returned lock keeps other writers out
/// while the server accepts review posts.
pub fn start_serve(cfg: &PipelineConfig, addr: SocketAddr) -> Result<(ServerHandle, CorpusLock)> {
    cfg.validate()?;
    let lock = CorpusLock::acquire(&cfg.corpus_path)?;
    let store = Arc::new(Store::open(&cfg.corpus_path)?);
    Ok((serve_api(store, addr)?, lock))
}
