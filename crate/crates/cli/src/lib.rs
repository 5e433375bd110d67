//! Pipeline commands behind the `radiometa` binary: collect, enrich, review,
//! export, import and serve.

mod admin;
mod collect;
mod config;
mod enrich;
mod lock;

pub use admin::{
    cmd_checkpoint, cmd_export, cmd_import, cmd_review, start_serve, ExportReport, ExportScope, ImportReport,
    ReviewReport,
};
pub use collect::{cmd_collect, CollectReport, StationReport};
pub use config::{ClockConfig, LibraryClientConfig, PipelineConfig, StationSourceConfig};
pub use enrich::{cmd_enrich, library_client, EnrichReport};
pub use lock::{CorpusLock, LOCK_FILE};

/// How a command finished, for the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    /// Retryable work remains.
    Partial,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Complete => 0,
            Outcome::Partial => 2,
        }
    }
}

pub const EXIT_FAILURE: i32 = 1;
