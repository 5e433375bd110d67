//! Random but valid corpora for property tests, benchmarks and demos.

use chrono::{FixedOffset, NaiveDate, TimeDelta, TimeZone};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::generate::{random_name, random_title};
use crate::domain::*;
use crate::store::Corpus;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthParams {
    pub events: usize,
    pub stations: usize,
    pub artists: usize,
    pub tracks: usize,
    /// Share of events that went through matching.
    pub matched_fraction: f64,
    /// Share of tracks with audio features.
    pub features_fraction: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            events: 1000,
            stations: 40,
            artists: 60,
            tracks: 150,
            matched_fraction: 0.8,
            features_fraction: 0.8,
        }
    }
}

/// (city, country, code, lon, lat, utc offset minutes)
const CITIES: [(&str, &str, &str, f64, f64, i32); 16] = [
    ("Johor Bahru", "Malaysia", "MY", 103.6545, 1.4783, 480),
    ("Kuala Lumpur", "Malaysia", "MY", 101.6869, 3.1390, 480),
    ("Jakarta", "Indonesia", "ID", 106.8456, -6.2088, 420),
    ("Surabaya", "Indonesia", "ID", 112.7521, -7.2575, 420),
    ("Bandung", "Indonesia", "ID", 107.6191, -6.9175, 420),
    ("São Paulo", "Brazil", "BR", -46.6333, -23.5505, -180),
    ("Lagos", "Nigeria", "NG", 3.3792, 6.5244, 60),
    ("Berlin", "Germany", "DE", 13.4050, 52.5200, 60),
    ("Zürich", "Switzerland", "CH", 8.5417, 47.3769, 60),
    ("Chicago", "United States", "US", -87.6298, 41.8781, -360),
    ("Austin", "United States", "US", -97.7431, 30.2672, -360),
    ("Montréal", "Canada", "CA", -73.5673, 45.5017, -300),
    ("Auckland", "New Zealand", "NZ", 174.7633, -36.8485, 720),
    ("Mumbai", "India", "IN", 72.8777, 19.0760, 330),
    ("Reykjavík", "Iceland", "IS", -21.9426, 64.1466, 0),
    ("Nairobi", "Kenya", "KE", 36.8219, -1.2921, 180),
];

const GENRES: [&str; 8] = [
    "pop",
    "rock",
    "jazz",
    "Indonesian pop",
    "hip hop",
    "dangdut",
    "pop-rock",
    "alternative rock",
];
const FORMATS: [&str; 4] = ["Adult Contemporary", "Top 40", "Talk", "Classic Hits"];
const LANGUAGES: [&str; 5] = ["Malay", "Indonesian", "English", "Portuguese", "German"];
const TONICS: [&str; 7] = ["C", "D", "E", "F", "G", "A", "B"];
const GENDERS: [&str; 3] = ["female", "male", "non-binary"];

fn pick<'a, R: Rng>(rng: &mut R, xs: &'a [&'a str]) -> &'a str {
    xs.choose(rng).unwrap()
}

fn subset<R: Rng>(rng: &mut R, xs: &[&str], max: usize) -> Vec<String> {
    let n = rng.random_range(0..=max);
    let mut out: Vec<String> = Vec::new();
    for _ in 0..n {
        let g = pick(rng, xs).to_string();
        if !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// Reliabilities concentrate around the 0.90 boundary so threshold tests
/// exercise both sides and the exact value.
fn reliability<R: Rng>(rng: &mut R) -> f64 {
    match rng.random_range(0..6) {
        0 => 1.0,
        1 => 0.9,
        2 => 0.89999,
        3 => 0.0,
        4 => rng.random_range(0.85..0.95),
        _ => rng.random_range(0.0..=1.0),
    }
}

pub fn synthetic_corpus(params: &SynthParams, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records: Vec<Record> = Vec::new();
    let locations: Vec<LocationRecord> = CITIES
        .iter()
        .enumerate()
        .map(|(i, &(city, country, code, lon, lat, off))| LocationRecord {
            location_id: format!("loc-{i:02}").into(),
            city: city.into(),
            country: country.into(),
            country_code: code.into(),
            continent: continent_for(code).expect("bundled code"),
            coordinates: Coordinates::new(lon, lat),
            population: rng.random_bool(0.7).then(|| rng.random_range(50_000..20_000_000)),
            country_gdp: rng.random_bool(0.7).then(|| rng.random_range(1e9..2e13)),
            utc_offset_min: Some(off),
        })
        .collect();
    records.extend(locations.iter().cloned().map(Record::from));

    let stations: Vec<StationRecord> = (0..params.stations.max(1))
        .map(|i| {
            let loc = locations.choose(&mut rng).unwrap();
            let form = match rng.random_range(0..3) {
                0 => StationForm::webcast(),
                1 => StationForm::simulcast(Band::Fm, rng.random_range(880..=1080) as f64 / 10.0),
                _ => StationForm::simulcast(Band::Am, rng.random_range(53..=170) as f64 * 10.0),
            };
            StationRecord {
                station_id: format!("st-{i:04}").into(),
                name: format!("Radio {}", random_name(&mut rng, 1..=2)),
                location_id: loc.location_id.clone(),
                form,
                formats: subset(&mut rng, &FORMATS, 2),
                genres: subset(&mut rng, &GENRES, 3),
                website: rng.random_bool(0.6).then(|| format!("https://radio{i}.example.org")),
                review_status: ReviewStatus::Unreviewed,
                reliability_pct: None,
            }
        })
        .collect();
    records.extend(stations.iter().cloned().map(Record::from));

    let artists: Vec<ArtistRecord> = (0..params.artists.max(1))
        .map(|i| {
            let group = rng.random_bool(0.2);
            ArtistRecord {
                artist_id: format!("ar-{i:04}").into(),
                name: random_name(&mut rng, 1..=2),
                artist_type: if group {
                    ArtistType::Group
                } else {
                    ArtistType::MusicalArtist
                },
                gender: (!group && rng.random_bool(0.8)).then(|| pick(&mut rng, &GENDERS).to_string()),
                country: rng
                    .random_bool(0.9)
                    .then(|| CITIES.choose(&mut rng).unwrap().1.to_string()),
                genres: subset(&mut rng, &GENRES, 3),
                instruments: subset(&mut rng, &["voice", "piano", "guitar", "drums"], 2),
                members: group.then(|| {
                    (0..rng.random_range(2..5))
                        .map(|k| GroupMember {
                            name: format!("Member {k}"),
                            gender: rng.random_bool(0.5).then(|| pick(&mut rng, &GENDERS).to_string()),
                            ethnicity: None,
                        })
                        .collect()
                }),
            }
        })
        .collect();
    records.extend(artists.iter().cloned().map(Record::from));

    let tracks: Vec<TrackRecord> = (0..params.tracks.max(1))
        .map(|i| {
            let f = |rng: &mut ChaCha8Rng| rng.random_range(0.0..=1.0);
            TrackRecord {
                track_id: format!("tr-{i:04}").into(),
                title: random_name(&mut rng, 1..=3),
                duration_s: rng.random_bool(0.9).then(|| rng.random_range(60..600)),
                year_released: rng.random_bool(0.9).then(|| rng.random_range(1950..=2022)),
                key_mode: rng.random_bool(0.8).then(|| KeyMode {
                    tonic: pick(&mut rng, &TONICS).to_string(),
                    mode: if rng.random_bool(0.5) { Mode::Major } else { Mode::Minor },
                }),
                language: rng.random_bool(0.7).then(|| pick(&mut rng, &LANGUAGES).to_string()),
                features: rng.random_bool(params.features_fraction).then(|| AudioFeatures {
                    danceability: f(&mut rng),
                    speechiness: f(&mut rng),
                    acousticness: f(&mut rng),
                    liveness: f(&mut rng),
                    instrumentalness: f(&mut rng),
                    valence: f(&mut rng),
                    arousal: f(&mut rng),
                }),
                popularity: rng.random_bool(0.8).then(|| rng.random_range(0..=100) as f64),
                listen_links: if rng.random_bool(0.5) {
                    vec![ListenLink {
                        platform: "stream".into(),
                        url: format!("https://listen.example.org/track/{i}"),
                    }]
                } else {
                    Vec::new()
                },
            }
        })
        .collect();
    records.extend(tracks.iter().cloned().map(Record::from));

    let start = NaiveDate::from_ymd_opt(2022, 10, 1)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap();
    for i in 0..params.events {
        let station = stations.choose(&mut rng).unwrap();
        let loc = locations.iter().find(|l| l.location_id == station.location_id).unwrap();
        let tz = FixedOffset::east_opt(loc.utc_offset_min.unwrap_or(0) * 60).unwrap();
        // Minute resolution over four months makes equal instants common.
        let minute = rng.random_range(0..(120 * 24 * 60) / 40) * 40;
        let time_at_station = tz.from_utc_datetime(&(start + TimeDelta::minutes(minute)));
        let matched = rng.random_bool(params.matched_fraction);
        let (rel, artist, track) = if matched {
            let r = reliability(&mut rng);
            if r > 0.0 {
                (
                    Some(r),
                    Some(artists.choose(&mut rng).unwrap()),
                    Some(tracks.choose(&mut rng).unwrap()),
                )
            } else {
                (Some(0.0), None, None)
            }
        } else {
            (None, None, None)
        };
        let description = match (artist, track) {
            (Some(a), Some(t)) => format!("{} - {}", a.name, t.title),
            _ => random_title(&mut rng),
        };
        records.push(
            EventRecord {
                event_id: format!("ev-{i:06}").into(),
                station_id: station.station_id.clone(),
                time_at_station,
                description,
                reliability: rel,
                artist_id: artist.map(|a| a.artist_id.clone()),
                track_id: track.map(|t| t.track_id.clone()),
            }
            .into(),
        );
    }
    let mut corpus = Corpus::new();
    corpus.upsert_batch(records).expect("synthetic records are valid");
    corpus
}
