#![allow(dead_code)]

use std::path::Path;

use chrono::{DateTime, TimeZone, Utc};
use radiometa_cli::{ClockConfig, LibraryClientConfig, PipelineConfig, StationSourceConfig};
use radiometa_core::matcher::{Library, MatchCandidate};
use radiometa_core::monitor::MonitorConfig;
use radiometa_core::sim::{generate_fleet, Fleet, Payload, ScriptParams};

pub fn epoch() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2022, 10, 3, 0, 0, 0).unwrap()
}

pub fn fleet(stations: usize, seed: u64) -> Fleet {
    generate_fleet(stations, epoch(), &ScriptParams::default(), seed)
}

pub fn config(corpus: &Path, quota: u32) -> PipelineConfig {
    PipelineConfig {
        monitor: MonitorConfig {
            events_per_station: quota,
            ..MonitorConfig::default()
        },
        corpus_path: corpus.to_path_buf(),
        clock: ClockConfig::Virtual,
        ..PipelineConfig::default()
    }
}

pub fn with_fleet_dir(mut cfg: PipelineConfig, dir: &Path) -> PipelineConfig {
    cfg.station_source = Some(StationSourceConfig::File(dir.to_path_buf()));
    cfg
}

pub fn with_fixture(mut cfg: PipelineConfig, path: &Path) -> PipelineConfig {
    cfg.library_client = Some(LibraryClientConfig::Fixture(path.to_path_buf()));
    cfg
}

/// Every scripted title as a candidate, split at its first dash separator.
pub fn fixture_for(fleet: &Fleet) -> Vec<MatchCandidate> {
    let mut titles: Vec<&str> = fleet
        .scripts
        .iter()
        .flat_map(|s| s.timeline.iter())
        .filter_map(|e| match &e.payload {
            Payload::Title(t) => Some(t.as_str()),
            _ => None,
        })
        .collect();
    titles.sort();
    titles.dedup();
    titles
        .into_iter()
        .map(|t| {
            let (a, b) = t
                .split_once(" \u{2013} ")
                .or_else(|| t.split_once(" - "))
                .expect("generated titles carry a separator");
            MatchCandidate::new(Library::Fixture, a, b, None)
        })
        .collect()
}
