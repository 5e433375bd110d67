//! The five partitioned tables (location, station, event, artist, track)
//! and their invariants.

mod continent;
mod duration;
pub mod fixtures;
mod records;
mod validate;

pub use continent::{continent_for, country_codes};
pub use duration::{format_duration, parse_duration, DurationError};
pub use records::*;
pub use validate::{validate_record, validate_record_in_year, Violation, MIN_RELEASE_YEAR};
