//! Partitioned corpus: tables, indexes, queries, review workflow and on-disk format.

mod corpus;
mod error;
mod filter;
mod persist;
mod review;

pub use corpus::{Corpus, EventRow, TableCounts};
pub use error::StoreError;
pub use filter::{Cursor, DateRange, EventFilter, HexCellRef};
pub use persist::{
    corpus_files, export_corpus, import_corpus, read_manifest, Manifest, Store, TableEntry, FORMAT_NAME,
    FORMAT_VERSION, MANIFEST_FILE, WAL_FILE,
};
pub use review::{ListEdit, ReviewAction, ReviewChange, ReviewEntry, StationEdits};
