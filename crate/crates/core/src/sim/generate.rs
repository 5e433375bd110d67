//! Random fleets and scripts. Adverts and blanks are placed preferentially on
//! entries that start near :00 and :30 local time, as on real stations.

use chrono::{DateTime, TimeDelta, Timelike, Utc};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fleet::Fleet;
use super::script::{Payload, ScenarioScript, TimelineEntry};
use crate::domain::*;
use crate::monitor::in_blackout_window;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScriptParams {
    pub entries: usize,
    /// Share of entries that are adverts or blanks.
    pub non_title_fraction: f64,
    /// Share of the non-title entries that are adverts (the rest are blank).
    pub advert_share: f64,
    /// Share of entries during which the station is offline.
    pub offline_fraction: f64,
    /// Entries starting within this many minutes of :00 or :30 take adverts first.
    pub ad_window_min: u32,
    pub min_entry_s: u64,
    pub max_entry_s: u64,
    /// Chance that a title entry replays an earlier title.
    pub repeat_probability: f64,
    pub looping: bool,
}

impl Default for ScriptParams {
    fn default() -> Self {
        Self {
            entries: 150,
            non_title_fraction: 0.2,
            advert_share: 0.7,
            offline_fraction: 0.0,
            ad_window_min: 5,
            min_entry_s: 90,
            max_entry_s: 300,
            repeat_probability: 0.1,
            looping: true,
        }
    }
}

const SYLLABLES: [&str; 16] = [
    "ka", "lo", "mi", "ra", "su", "te", "no", "vi", "da", "ne", "ri", "sa", "mo", "be", "la", "to",
];

const ADVERTS: [&str; 6] = [
    "ADVERT BREAK",
    "Commercial break",
    "Advertisement - Sponsor",
    "Station ID",
    "Jingle",
    "unknown",
];

fn word<R: Rng>(rng: &mut R) -> String {
    let n = rng.random_range(2..=3);
    let mut w: String = (0..n).map(|_| *SYLLABLES.choose(rng).unwrap()).collect();
    w[..1].make_ascii_uppercase();
    w
}

/// Capitalized words of consonant-vowel syllables, which can never spell a
/// default blacklist term.
pub fn random_name<R: Rng>(rng: &mut R, words: std::ops::RangeInclusive<usize>) -> String {
    let n = rng.random_range(words);
    (0..n).map(|_| word(rng)).collect::<Vec<_>>().join(" ")
}

/// "Artist - Title", with an en dash separator a quarter of the time.
pub fn random_title<R: Rng>(rng: &mut R) -> String {
    let artist = random_name(rng, 1..=2);
    let title = random_name(rng, 1..=3);
    let sep = if rng.random_bool(0.25) { " \u{2013} " } else { " - " };
    format!("{artist}{sep}{title}")
}

/// Script whose offset zero falls at `epoch_local`, the station's wall clock
/// at the fleet epoch.
pub fn generate_script<T: Timelike>(
    station_id: StationId,
    epoch_local: &T,
    params: &ScriptParams,
    seed: u64,
) -> ScenarioScript {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.entries.max(1);
    let mut starts = Vec::with_capacity(n);
    let mut t = 0u64;
    for _ in 0..n {
        starts.push(t);
        t += rng.random_range(params.min_entry_s.max(1)..=params.max_entry_s.max(params.min_entry_s.max(1)));
    }
    let duration = t;

    let epoch_s = epoch_local.num_seconds_from_midnight() as u64;
    let near_window = |offset: u64| {
        let s = ((epoch_s + offset) % 86_400) as u32;
        let time = chrono::NaiveTime::from_num_seconds_from_midnight_opt(s, 0).unwrap();
        in_blackout_window(&time, params.ad_window_min)
    };
    let (mut near, mut far): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| near_window(starts[i]));
    near.shuffle(&mut rng);
    far.shuffle(&mut rng);
    let n_non_title = ((n as f64) * params.non_title_fraction).round() as usize;
    let n_offline = ((n as f64) * params.offline_fraction).round() as usize;
    let mut kinds = vec![0u8; n]; // 0 title, 1 advert, 2 blank, 3 offline
    let mut order = near.into_iter().chain(far);
    for i in order.by_ref().take(n_non_title.min(n)) {
        kinds[i] = if rng.random_bool(params.advert_share.clamp(0.0, 1.0)) {
            1
        } else {
            2
        };
    }
    for i in order.take(n_offline) {
        kinds[i] = 3;
    }

    let mut titles: Vec<String> = Vec::new();
    let timeline = (0..n)
        .map(|i| {
            let payload = match kinds[i] {
                1 => Payload::Advert(ADVERTS.choose(&mut rng).unwrap().to_string()),
                2 => Payload::Blank,
                3 => Payload::Offline,
                _ => {
                    let title = if !titles.is_empty() && rng.random_bool(params.repeat_probability) {
                        titles.choose(&mut rng).unwrap().clone()
                    } else {
                        random_title(&mut rng)
                    };
                    titles.push(title.clone());
                    Payload::Title(title)
                }
            };
            TimelineEntry {
                start_offset_s: starts[i],
                payload,
            }
        })
        .collect();
    ScenarioScript {
        station_id,
        timeline,
        looping: params.looping,
        duration_s: Some(duration),
    }
}

/// `n` stations at random locations, one script each.
pub fn generate_fleet(n: usize, epoch: DateTime<Utc>, params: &ScriptParams, seed: u64) -> Fleet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let codes = country_codes();
    let mut fleet = Fleet {
        epoch,
        locations: Vec::new(),
        stations: Vec::new(),
        scripts: Vec::new(),
    };
    for i in 0..n {
        let code = *codes.choose(&mut rng).unwrap();
        let lon = rng.random_range(-180.0..=180.0f64);
        let lat = rng.random_range(-60.0..=70.0f64);
        let offset_min = ((lon / 15.0).round() as i32) * 60;
        let location = LocationRecord {
            location_id: format!("loc-sim-{i:04}").into(),
            city: format!("City {i}"),
            country: format!("Country {code}"),
            country_code: code.to_string(),
            continent: continent_for(code).expect("code from the table"),
            coordinates: Coordinates::new(lon, lat),
            population: Some(rng.random_range(10_000..5_000_000)),
            country_gdp: None,
            utc_offset_min: Some(offset_min),
        };
        let form = if rng.random_bool(0.5) {
            StationForm::webcast()
        } else {
            StationForm::simulcast(Band::Fm, (rng.random_range(880..=1080) as f64) / 10.0)
        };
        let station = StationRecord {
            station_id: format!("st-sim-{i:04}").into(),
            name: format!("Sim Radio {i}"),
            location_id: location.location_id.clone(),
            form,
            formats: vec!["Top 40".into()],
            genres: vec!["pop".into()],
            website: None,
            review_status: ReviewStatus::Unreviewed,
            reliability_pct: None,
        };
        let local = (epoch + TimeDelta::minutes(offset_min as i64)).naive_utc();
        let script_seed = rng.random();
        fleet
            .scripts
            .push(generate_script(station.station_id.clone(), &local, params, script_seed));
        fleet.locations.push(location);
        fleet.stations.push(station);
    }
    fleet
}
