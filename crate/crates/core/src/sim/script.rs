use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::StationId;

/// What a simulated station emits on its metadata channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "text", rename_all = "snake_case")]
pub enum Payload {
    Title(String),
    Advert(String),
    Blank,
    /// The station refuses connections.
    Offline,
}

impl Payload {
    /// Stream title text, if the payload carries one.
    pub fn text(&self) -> Option<&str> {
        match self {
            Payload::Title(t) | Payload::Advert(t) => Some(t),
            Payload::Blank | Payload::Offline => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimelineEntry {
    pub start_offset_s: u64,
    pub payload: Payload,
}

/// A station's deterministic emission timeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioScript {
    pub station_id: StationId,
    pub timeline: Vec<TimelineEntry>,
    #[serde(rename = "loop", default)]
    pub looping: bool,
    /// Length of one pass. Required when looping; a non-looping script with a
    /// duration ends there, one without holds its last entry forever.
    #[serde(default)]
    pub duration_s: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("script {0} has an empty timeline")]
    Empty(StationId),
    #[error("script {0} must start at offset 0")]
    FirstOffset(StationId),
    #[error("script {station}: start offsets must strictly increase (entry {index})")]
    NotIncreasing { station: StationId, index: usize },
    #[error("script {0}: a looping script needs duration_s")]
    MissingDuration(StationId),
    #[error("script {0}: duration_s must exceed the last start offset")]
    DurationTooShort(StationId),
}

/// Result of asking a script what it plays at a given time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emission<'a> {
    Payload(&'a Payload),
    /// A non-looping script has run past its duration.
    Ended,
}

impl ScenarioScript {
    pub fn validate(&self) -> Result<(), ScriptError> {
        let id = || self.station_id.clone();
        let first = self.timeline.first().ok_or_else(|| ScriptError::Empty(id()))?;
        if first.start_offset_s != 0 {
            return Err(ScriptError::FirstOffset(id()));
        }
        for (i, w) in self.timeline.windows(2).enumerate() {
            if w[1].start_offset_s <= w[0].start_offset_s {
                return Err(ScriptError::NotIncreasing {
                    station: id(),
                    index: i + 1,
                });
            }
        }
        let last = self.timeline.last().map_or(0, |e| e.start_offset_s);
        match self.duration_s {
            None if self.looping => Err(ScriptError::MissingDuration(id())),
            Some(d) if d <= last => Err(ScriptError::DurationTooShort(id())),
            _ => Ok(()),
        }
    }

    fn entry_at(&self, t: u64) -> &Payload {
        let idx = self.timeline.partition_point(|e| e.start_offset_s <= t);
        &self.timeline[idx.saturating_sub(1)].payload
    }

    /// Payload of the last entry starting at or before `t_s`; looping scripts
    /// wrap modulo their duration, others clamp to the final entry.
    pub fn payload_at(&self, t_s: u64) -> &Payload {
        match (self.looping, self.duration_s) {
            (true, Some(d)) if d > 0 => self.entry_at(t_s % d),
            _ => self.entry_at(t_s),
        }
    }

    pub fn emission_at(&self, t_s: u64) -> Emission<'_> {
        match self.duration_s {
            Some(d) if !self.looping && t_s >= d => Emission::Ended,
            _ => Emission::Payload(self.payload_at(t_s)),
        }
    }
}
