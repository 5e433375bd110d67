use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::{bail, Context, Result};
use chrono::{DateTime, FixedOffset, Utc};
use radiometa_core::clock::{AcceleratedClock, Clock, VirtualClock};
use radiometa_core::domain::{LocationRecord, Record, StationId, StationRecord};
use radiometa_core::monitor::{
    monitor_station_from, sample_stations, MetadataSource, MonitorOutcome, PollTally, StopReason,
};
use radiometa_core::sim::{Fleet, SimulatedSource};
use radiometa_core::store::Store;
use radiometa_net::{fetch_directory, HttpSource};
use serde::{Deserialize, Serialize};

use crate::config::{ClockConfig, PipelineConfig, StationSourceConfig};
use crate::lock::CorpusLock;
use crate::Outcome;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationReport {
    pub station_id: StationId,
    pub stop: StopReason,
    pub tally: PollTally,
    pub events_written: usize,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollectReport {
    pub start: DateTime<Utc>,
    pub stations_available: usize,
    pub stations_monitored: usize,
    pub totals: PollTally,
    /// New events stored. Events already in the corpus (a rerun over the same
    /// window) are left untouched and counted in `events_already_present`.
    pub events_written: usize,
    pub events_already_present: usize,
    pub stations: Vec<StationReport>,
    /// Stations that stopped answering, with the last error.
    pub failures: Vec<(StationId, String)>,
}

impl CollectReport {
    pub fn reconciles(&self) -> bool {
        let mut sum = PollTally::default();
        for s in &self.stations {
            sum.add(&s.tally);
        }
        sum == self.totals && self.totals.reconciles()
    }

    pub fn outcome(&self) -> Outcome {
        if self.failures.is_empty() {
            Outcome::Complete
        } else {
            Outcome::Partial
        }
    }
}

enum Source {
    Http(String),
    Local(Fleet),
}

impl Source {
    fn open(&self) -> Box<dyn MetadataSource> {
        match self {
            Source::Http(url) => Box::new(HttpSource::new(url)),
            Source::Local(fleet) => Box::new(SimulatedSource::new(fleet)),
        }
    }
}

/// Virtual clocks are per station; accelerated ones are clones of a single
/// clock, so every station shares one timeline.
fn clock(cfg: &ClockConfig, start: DateTime<Utc>, shared: &Option<AcceleratedClock>) -> Box<dyn Clock> {
    match (cfg, shared) {
        (ClockConfig::Accelerated { .. }, Some(c)) => Box::new(c.clone()),
        _ => Box::new(VirtualClock::new(start)),
    }
}

fn utc_offset(location: Option<&LocationRecord>) -> FixedOffset {
    let minutes = location.and_then(|l| l.utc_offset_min).unwrap_or(0);
    FixedOffset::east_opt(minutes * 60).unwrap_or(FixedOffset::east_opt(0).unwrap())
}

/// Samples stations from the configured source, monitors them concurrently
/// and stores each station's events as soon as its monitor stops.
pub fn cmd_collect(cfg: &PipelineConfig) -> Result<CollectReport> {
    cfg.validate()?;
    let (epoch, locations, stations, source) = match &cfg.station_source {
        None => bail!("collect needs station_source in the config"),
        Some(StationSourceConfig::Simulator(url)) => {
            let dir = fetch_directory(url)?;
            (dir.epoch, dir.locations, dir.stations, Source::Http(url.clone()))
        }
        Some(StationSourceConfig::File(path)) => {
            let fleet = Fleet::load(path).with_context(|| format!("loading fleet {}", path.display()))?;
            (
                fleet.epoch,
                fleet.locations.clone(),
                fleet.stations.clone(),
                Source::Local(fleet),
            )
        }
    };
    let start = cfg.start.unwrap_or(epoch);
    let n = cfg.monitor.station_sample_size.min(stations.len());
    let mut sampled: Vec<StationRecord> = sample_stations(&stations, n, cfg.monitor.rng_seed)?;
    sampled.sort_by(|a, b| a.station_id.cmp(&b.station_id));
    let locations: BTreeMap<_, _> = locations.into_iter().map(|l| (l.location_id.clone(), l)).collect();

    let _lock = CorpusLock::acquire(&cfg.corpus_path)?;
    let store = Store::open(&cfg.corpus_path)?;
    let snapshot = store.snapshot();
    let mut directory: BTreeMap<String, Record> = BTreeMap::new();
    for st in &sampled {
        if snapshot.station(&st.station_id).is_some() {
            continue;
        }
        let loc = locations
            .get(&st.location_id)
            .with_context(|| format!("station {} has no location in the directory", st.station_id))?;
        if snapshot.location(&loc.location_id).is_none() {
            directory.insert(format!("0{}", loc.location_id), loc.clone().into());
        }
        directory.insert(format!("1{}", st.station_id), st.clone().into());
    }
    store.commit(directory.into_values().collect())?;

    let shared = match cfg.clock {
        ClockConfig::Accelerated { factor } => Some(AcceleratedClock::new(start, factor)),
        ClockConfig::Virtual => None,
    };
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Result<(MonitorOutcome, usize, usize)>>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..cfg.workers.min(sampled.len()).max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(st) = sampled.get(i) else { break };
                let offset = utc_offset(locations.get(&st.location_id));
                let mut src = source.open();
                let mut clk = clock(&cfg.clock, start, &shared);
                let outcome = monitor_station_from(st, offset, src.as_mut(), &cfg.monitor, clk.as_mut(), start);
                let snap = store.snapshot();
                let (fresh, old): (Vec<_>, Vec<_>) = outcome
                    .events
                    .iter()
                    .cloned()
                    .partition(|e| snap.event(&e.event_id).is_none());
                let written = fresh.len();
                let r = store
                    .commit(fresh.into_iter().map(Record::from).collect())
                    .map(|_| (outcome, written, old.len()))
                    .map_err(anyhow::Error::from);
                results.lock().unwrap().push(r);
            });
        }
    });

    let mut outcomes = results.into_inner().unwrap().into_iter().collect::<Result<Vec<_>>>()?;
    outcomes.sort_by(|a, b| a.0.station_id.cmp(&b.0.station_id));
    let mut report = CollectReport {
        start,
        stations_available: stations.len(),
        stations_monitored: outcomes.len(),
        totals: PollTally::default(),
        events_written: 0,
        events_already_present: 0,
        stations: Vec::new(),
        failures: Vec::new(),
    };
    for (o, written, old) in outcomes {
        report.totals.add(&o.tally);
        report.events_written += written;
        report.events_already_present += old;
        if let Some(f) = &o.failure {
            report.failures.push((o.station_id.clone(), f.clone()));
        }
        report.stations.push(StationReport {
            station_id: o.station_id,
            stop: o.stop,
            tally: o.tally,
            events_written: written,
            failure: o.failure,
        });
    }
    Ok(report)
}
