//! Scripted station fleet used as ground truth for monitoring runs.

mod fleet;
mod generate;
mod script;
mod synth;

pub use fleet::{script_time, Fleet, FleetError, SimulatedSource, FLEET_FILE};
pub use generate::{generate_fleet, generate_script, random_name, random_title, ScriptParams};
pub use script::{Emission, Payload, ScenarioScript, ScriptError, TimelineEntry};
pub use synth::{synthetic_corpus, SynthParams};
