//! On-disk corpus: one NDJSON file per table, the review log, and a manifest
//! with row counts and checksums. Rows are written in id order, so exporting
//! an imported corpus reproduces the files byte for byte.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use chrono::{DateTime, Utc};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::corpus::Corpus;
use super::error::StoreError;
use super::review::{ReviewChange, ReviewEntry, StationEdits};
use crate::domain::{ArtistRecord, EventRecord, LocationRecord, Record, StationId, StationRecord, TrackRecord};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const WAL_FILE: &str = "wal.ndjson";
pub const FORMAT_NAME: &str = "radiometa-corpus";
pub const FORMAT_VERSION: u32 = 1;

/// Tables in load order; references always point to earlier tables.
const TABLES: [&str; 6] = ["location", "station", "artist", "track", "event", "review"];

/// Secondary indexes rebuilt on load.
const INDEXES: [&str; 3] = [
    "event_by_station_time_desc",
    "station_by_location",
    "event_by_reliability",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub name: String,
    pub file: String,
    pub rows: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub version: u32,
    pub tables: Vec<TableEntry>,
    pub indexes: Vec<String>,
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn format_err(path: &Path, message: impl Into<String>) -> StoreError {
    StoreError::Format {
        path: path.display().to_string(),
        message: message.into(),
    }
}

fn ndjson<T: Serialize>(rows: impl Iterator<Item = T>) -> (Vec<u8>, usize) {
    let mut buf = Vec::new();
    let mut n = 0;
    for row in rows {
        serde_json::to_writer(&mut buf, &row).expect("records serialize");
        buf.push(b'\n');
        n += 1;
    }
    (buf, n)
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Serialized table files and manifest, keyed by file name.
pub fn corpus_files(corpus: &Corpus) -> Vec<(String, Vec<u8>)> {
    let tables: Vec<(&str, (Vec<u8>, usize))> = vec![
        ("location", ndjson(corpus.locations())),
        ("station", ndjson(corpus.stations())),
        ("artist", ndjson(corpus.artists())),
        ("track", ndjson(corpus.tracks())),
        ("event", ndjson(corpus.events())),
        ("review", ndjson(corpus.reviews().iter())),
    ];
    let manifest = Manifest {
        format: FORMAT_NAME.into(),
        version: FORMAT_VERSION,
        tables: tables
            .iter()
            .map(|(name, (bytes, rows))| TableEntry {
                name: name.to_string(),
                file: format!("{name}.ndjson"),
                rows: *rows,
                sha256: sha256_hex(bytes),
            })
            .collect(),
        indexes: INDEXES.iter().map(|s| s.to_string()).collect(),
    };
    let mut files: Vec<(String, Vec<u8>)> = tables
        .into_iter()
        .map(|(name, (bytes, _))| (format!("{name}.ndjson"), bytes))
        .collect();
    let mut m = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    m.push(b'\n');
    files.push((MANIFEST_FILE.into(), m));
    files
}

/// Writes the corpus into `dir`, replacing table files atomically.
pub fn export_corpus(corpus: &Corpus, dir: &Path) -> Result<(), StoreError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    // Manifest last, so a crash never leaves a manifest describing missing files.
    for (name, bytes) in corpus_files(corpus) {
        let path = dir.join(&name);
        let tmp = dir.join(format!(".{name}.tmp"));
        let mut f = File::create(&tmp).map_err(io_err(&tmp))?;
        f.write_all(&bytes).map_err(io_err(&tmp))?;
        f.sync_all().map_err(io_err(&tmp))?;
        fs::rename(&tmp, &path).map_err(io_err(&path))?;
    }
    Ok(())
}

fn read_rows<T: DeserializeOwned>(path: &Path, bytes: &[u8]) -> Result<Vec<T>, StoreError> {
    bytes
        .split(|&b| b == b'\n')
        .enumerate()
        .filter(|(_, line)| !line.is_empty())
        .map(|(i, line)| serde_json::from_slice(line).map_err(|e| format_err(path, format!("line {}: {e}", i + 1))))
        .collect()
}

pub fn read_manifest(dir: &Path) -> Result<Manifest, StoreError> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| format_err(&path, e.to_string()))?;
    if manifest.format != FORMAT_NAME || manifest.version != FORMAT_VERSION {
        return Err(format_err(
            &path,
            format!("unsupported format {} v{}", manifest.format, manifest.version),
        ));
    }
    Ok(manifest)
}

/// Loads and verifies a corpus directory written by [`export_corpus`].
pub fn import_corpus(dir: &Path) -> Result<Corpus, StoreError> {
    let manifest = read_manifest(dir)?;
    let mut corpus = Corpus::new();
    for table in TABLES {
        let entry = manifest
            .tables
            .iter()
            .find(|t| t.name == table)
            .ok_or_else(|| format_err(&dir.join(MANIFEST_FILE), format!("missing table {table}")))?;
        let path = dir.join(&entry.file);
        let bytes = fs::read(&path).map_err(io_err(&path))?;
        if sha256_hex(&bytes) != entry.sha256 {
            return Err(format_err(&path, "checksum mismatch"));
        }
        let records: Vec<Record> = match table {
            "location" => read_rows::<LocationRecord>(&path, &bytes)?
                .into_iter()
                .map(Into::into)
                .collect(),
            "station" => read_rows::<StationRecord>(&path, &bytes)?
                .into_iter()
                .map(Into::into)
                .collect(),
            "artist" => read_rows::<ArtistRecord>(&path, &bytes)?
                .into_iter()
                .map(Into::into)
                .collect(),
            "track" => read_rows::<TrackRecord>(&path, &bytes)?
                .into_iter()
                .map(Into::into)
                .collect(),
            "event" => read_rows::<EventRecord>(&path, &bytes)?
                .into_iter()
                .map(Into::into)
                .collect(),
            _ => {
                let reviews = read_rows::<ReviewEntry>(&path, &bytes)?;
                if reviews.len() != entry.rows {
                    return Err(format_err(&path, "row count differs from manifest"));
                }
                corpus.reviews = reviews;
                continue;
            }
        };
        if records.len() != entry.rows {
            return Err(format_err(&path, "row count differs from manifest"));
        }
        corpus.upsert_batch(records)?;
    }
    Ok(corpus)
}

/// One durable write: records and review-log lines applied together.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct WalBatch {
    records: Vec<Record>,
    #[serde(default)]
    reviews: Vec<ReviewEntry>,
}

/// Durable corpus with a single serialized writer and snapshot readers.
///
/// Each commit is appended as one line to a write-ahead log and fsynced before
/// it becomes visible. [`Store::checkpoint`] folds the log into the table files.
/// A torn final log line (crash mid-write) is ignored on open.
#[derive(Debug)]
pub struct Store {
    dir: Option<PathBuf>,
    writer: Mutex<Option<File>>,
    current: RwLock<Arc<Corpus>>,
}

impl Store {
    pub fn in_memory() -> Self {
        Self::from_corpus(Corpus::new())
    }

    pub fn from_corpus(corpus: Corpus) -> Self {
        Self {
            dir: None,
            writer: Mutex::new(None),
            current: RwLock::new(Arc::new(corpus)),
        }
    }

    pub fn open(dir: &Path) -> Result<Self, StoreError> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let mut corpus = if dir.join(MANIFEST_FILE).exists() {
            import_corpus(dir)?
        } else {
            Corpus::new()
        };
        let wal_path = dir.join(WAL_FILE);
        if wal_path.exists() {
            let reader = BufReader::new(File::open(&wal_path).map_err(io_err(&wal_path))?);
            let lines: Vec<String> = reader.lines().collect::<Result<_, _>>().map_err(io_err(&wal_path))?;
            let last = lines.len().saturating_sub(1);
            for (i, line) in lines.iter().enumerate() {
                if line.is_empty() {
                    continue;
                }
                match serde_json::from_str::<WalBatch>(line) {
                    Ok(batch) => {
                        corpus.upsert_batch(batch.records)?;
                        corpus.reviews.extend(batch.reviews);
                    }
                    Err(_) if i == last => break,
                    Err(e) => return Err(format_err(&wal_path, format!("line {}: {e}", i + 1))),
                }
            }
        }
        let wal = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&wal_path)
            .map_err(io_err(&wal_path))?;
        Ok(Self {
            dir: Some(dir.to_path_buf()),
            writer: Mutex::new(Some(wal)),
            current: RwLock::new(Arc::new(corpus)),
        })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// Consistent view as of the last completed commit.
    pub fn snapshot(&self) -> Arc<Corpus> {
        self.current.read().expect("store lock poisoned").clone()
    }

    fn commit_batch(&self, batch: WalBatch) -> Result<usize, StoreError> {
        let mut wal = self.writer.lock().expect("store writer poisoned");
        self.snapshot().check_batch(&batch.records)?;
        if let (Some(file), Some(dir)) = (wal.as_mut(), self.dir.as_ref()) {
            let path = dir.join(WAL_FILE);
            let mut line = serde_json::to_vec(&batch).expect("batch serializes");
            line.push(b'\n');
            file.write_all(&line).map_err(io_err(&path))?;
            file.sync_data().map_err(io_err(&path))?;
        }
        let n = batch.records.len();
        let mut current = self.current.write().expect("store lock poisoned");
        let corpus = Arc::make_mut(&mut current);
        corpus.upsert_batch(batch.records)?;
        corpus.reviews.extend(batch.reviews);
        Ok(n)
    }

    /// Validates and applies a batch atomically.
    pub fn commit(&self, records: Vec<Record>) -> Result<usize, StoreError> {
        self.commit_batch(WalBatch {
            records,
            reviews: Vec::new(),
        })
    }

    fn commit_review(&self, change: ReviewChange) -> Result<(), StoreError> {
        self.commit_batch(WalBatch {
            records: change.records,
            reviews: vec![change.entry],
        })
        .map(|_| ())
    }

    pub fn review_station(
        &self,
        station_id: &StationId,
        edits: &StationEdits,
        at: DateTime<Utc>,
    ) -> Result<StationRecord, StoreError> {
        let change = self.snapshot().plan_review(station_id, edits, at)?;
        self.commit_review(change)?;
        Ok(self.snapshot().station(station_id).cloned().expect("just written"))
    }

    pub fn compute_station_reliability(
        &self,
        station_id: &StationId,
        threshold: f64,
        at: DateTime<Utc>,
    ) -> Result<f64, StoreError> {
        let change = self.snapshot().plan_station_reliability(station_id, threshold, at)?;
        self.commit_review(change)?;
        Ok(self
            .snapshot()
            .station(station_id)
            .and_then(|s| s.reliability_pct)
            .unwrap_or_default())
    }

    /// Rewrites the table files from the current state and empties the log.
    pub fn checkpoint(&self) -> Result<(), StoreError> {
        let Some(dir) = &self.dir else {
            return Ok(());
        };
        let mut wal = self.writer.lock().expect("store writer poisoned");
        export_corpus(&self.snapshot(), dir)?;
        let path = dir.join(WAL_FILE);
        let file = File::create(&path).map_err(io_err(&path))?;
        file.sync_all().map_err(io_err(&path))?;
        *wal = Some(OpenOptions::new().append(true).open(&path).map_err(io_err(&path))?);
        Ok(())
    }
}
