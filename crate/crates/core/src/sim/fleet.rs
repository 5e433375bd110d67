use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::script::{Emission, Payload, ScenarioScript, ScriptError};
use crate::domain::{LocationRecord, StationId, StationRecord};
use crate::monitor::{
    encode_icy_metadata_block, parse_icy_metadata_block, MetadataSource, Poll, SourceError, StreamMetadata,
};

pub const FLEET_FILE: &str = "fleet.json";

/// Station directory and scripts for one simulated fleet. Script time zero is
/// `epoch`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fleet {
    pub epoch: DateTime<Utc>,
    pub locations: Vec<LocationRecord>,
    pub stations: Vec<StationRecord>,
    pub scripts: Vec<ScenarioScript>,
}

/// The part of a fleet stored in `fleet.json`; scripts live beside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Directory {
    epoch: DateTime<Utc>,
    locations: Vec<LocationRecord>,
    stations: Vec<StationRecord>,
}

#[derive(Debug, Error)]
pub enum FleetError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Json { path: String, message: String },
    #[error(transparent)]
    Script(#[from] ScriptError),
    #[error("station {0} has more than one script")]
    DuplicateScript(StationId),
    #[error("script for {0} has no station in the directory")]
    UnknownStation(StationId),
}

impl Fleet {
    pub fn validate(&self) -> Result<(), FleetError> {
        let mut seen = std::collections::BTreeSet::new();
        for s in &self.scripts {
            s.validate()?;
            if !seen.insert(&s.station_id) {
                return Err(FleetError::DuplicateScript(s.station_id.clone()));
            }
            if !self.stations.iter().any(|st| st.station_id == s.station_id) {
                return Err(FleetError::UnknownStation(s.station_id.clone()));
            }
        }
        Ok(())
    }

    /// Writes `fleet.json` plus one `<station_id>.json` script per station.
    pub fn save(&self, dir: &Path) -> Result<(), FleetError> {
        let io = |p: &Path| {
            let path = p.display().to_string();
            move |source| FleetError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io(dir))?;
        let directory = Directory {
            epoch: self.epoch,
            locations: self.locations.clone(),
            stations: self.stations.clone(),
        };
        let p = dir.join(FLEET_FILE);
        fs::write(&p, serde_json::to_vec_pretty(&directory).expect("serializes")).map_err(io(&p))?;
        for s in &self.scripts {
            let p = dir.join(format!("{}.json", s.station_id));
            fs::write(&p, serde_json::to_vec_pretty(s).expect("serializes")).map_err(io(&p))?;
        }
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self, FleetError> {
        fn read<T: serde::de::DeserializeOwned>(p: &Path) -> Result<T, FleetError> {
            let path = p.display().to_string();
            let bytes = fs::read(p).map_err(|source| FleetError::Io {
                path: path.clone(),
                source,
            })?;
            serde_json::from_slice(&bytes).map_err(|e| FleetError::Json {
                path,
                message: e.to_string(),
            })
        }
        let directory: Directory = read(&dir.join(FLEET_FILE))?;
        let mut paths: Vec<_> = fs::read_dir(dir)
            .map_err(|source| FleetError::Io {
                path: dir.display().to_string(),
                source,
            })?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json") && !p.ends_with(FLEET_FILE))
            .collect();
        paths.sort();
        let scripts = paths
            .iter()
            .map(|p| read(p))
            .collect::<Result<Vec<ScenarioScript>, _>>()?;
        let fleet = Fleet {
            epoch: directory.epoch,
            locations: directory.locations,
            stations: directory.stations,
            scripts,
        };
        fleet.validate()?;
        Ok(fleet)
    }

    pub fn script_index(&self) -> BTreeMap<StationId, ScenarioScript> {
        self.scripts.iter().map(|s| (s.station_id.clone(), s.clone())).collect()
    }
}

/// In-process stand-in for the HTTP simulator: answers polls straight from the
/// scripts, passing every title through the ICY encoder and parser.
#[derive(Debug, Clone)]
pub struct SimulatedSource {
    epoch: DateTime<Utc>,
    scripts: BTreeMap<StationId, ScenarioScript>,
}

impl SimulatedSource {
    pub fn new(fleet: &Fleet) -> Self {
        Self {
            epoch: fleet.epoch,
            scripts: fleet.script_index(),
        }
    }
}

/// Seconds since `epoch`, floored; times before the epoch read as zero.
pub fn script_time(epoch: DateTime<Utc>, at: DateTime<Utc>) -> u64 {
    (at - epoch).num_seconds().max(0) as u64
}

impl MetadataSource for SimulatedSource {
    fn poll(&mut self, station: &StationId, at: DateTime<Utc>) -> Result<Poll, SourceError> {
        let script = self
            .scripts
            .get(station)
            .ok_or_else(|| SourceError::UnknownStation(station.clone()))?;
        let payload = match script.emission_at(script_time(self.epoch, at)) {
            Emission::Ended => return Ok(Poll::EndOfScript),
            Emission::Payload(p) => p,
        };
        if *payload == Payload::Offline {
            return Err(SourceError::Connection {
                station: station.clone(),
                message: "station offline".into(),
            });
        }
        let protocol = |e: crate::monitor::IcyError| SourceError::Protocol {
            station: station.clone(),
            message: e.to_string(),
        };
        let block = encode_icy_metadata_block(payload.text()).map_err(protocol)?;
        let title = parse_icy_metadata_block(&block).map_err(protocol)?.into_text();
        Ok(Poll::Metadata(StreamMetadata {
            stream_title: title,
            captured_at: at,
            station_id: station.clone(),
        }))
    }
}
