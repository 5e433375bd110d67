//! Station monitoring: ICY framing, description screening, blackout windows,
//! station sampling and the per-station poll loop.

mod describe;
mod icy;
mod sampling;
mod schedule;
mod station;

pub use describe::{default_blacklist, is_excluded, split_description, ExclusionReason, DEFAULT_BLACKLIST, SEPARATORS};
pub use icy::{encode_icy_metadata_block, parse_icy_metadata_block, IcyError, IcyPayload, MAX_TITLE_BYTES};
pub use sampling::{sample_stations, SampleSizeError};
pub use schedule::in_blackout_window;
pub use station::{
    event_id_for, monitor_station, monitor_station_from, ConfigError, MetadataSource, MonitorConfig, MonitorOutcome,
    Poll, PollTally, ScriptedSource, SourceError, StopReason, StreamMetadata, POLL_ATTEMPTS,
};
