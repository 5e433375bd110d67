use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chrono::{DateTime, Utc};
use radiometa_core::matcher::RELIABLE_THRESHOLD;
use radiometa_core::monitor::MonitorConfig;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LibraryClientConfig {
    /// JSON array of candidates on disk.
    Fixture(PathBuf),
    /// Base URL of a server answering `GET /search?q=`.
    Http(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StationSourceConfig {
    /// Base URL of a running simulator.
    Simulator(String),
    /// A fleet directory (`fleet.json` plus scripts), polled in process.
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClockConfig {
    /// Polls run back to back; no real time passes.
    Virtual,
    /// One real second is `factor` simulated seconds.
    Accelerated { factor: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub monitor: MonitorConfig,
    pub match_threshold: f64,
    pub corpus_path: PathBuf,
    pub library_client: Option<LibraryClientConfig>,
    pub station_source: Option<StationSourceConfig>,
    pub clock: ClockConfig,
    /// Collection start; defaults to the fleet epoch.
    pub start: Option<DateTime<Utc>>,
    /// Concurrent station monitors and library requests.
    pub workers: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            monitor: MonitorConfig::default(),
            match_threshold: RELIABLE_THRESHOLD,
            corpus_path: PathBuf::from("corpus"),
            library_client: None,
            station_source: None,
            clock: ClockConfig::Virtual,
            start: None,
            workers: 8,
        }
    }
}

fn rebase(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl PipelineConfig {
    /// Reads a config file; relative paths in it are taken from its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: Self =
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        rebase(base, &mut cfg.corpus_path);
        if let Some(LibraryClientConfig::Fixture(p)) = &mut cfg.library_client {
            rebase(base, p);
        }
        if let Some(StationSourceConfig::File(p)) = &mut cfg.station_source {
            rebase(base, p);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.monitor.validate()?;
        if !(0.0..=1.0).contains(&self.match_threshold) {
            bail!("match_threshold must lie in [0, 1], got {}", self.match_threshold);
        }
        if self.workers == 0 {
            bail!("workers must be at least 1");
        }
        if let ClockConfig::Accelerated { factor } = self.clock {
            if !(factor.is_finite() && factor > 0.0) {
                bail!("clock factor must be positive");
            }
        }
        if self.corpus_path.exists() && !self.corpus_path.is_dir() {
            bail!("corpus_path {} is not a directory", self.corpus_path.display());
        }
        Ok(())
    }
}
