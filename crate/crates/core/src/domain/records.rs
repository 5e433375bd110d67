use std::fmt;

use chrono::{DateTime, FixedOffset};
use serde::{Deserialize, Serialize};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_string())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
    };
}

id_type!(LocationId);
id_type!(StationId);
id_type!(EventId);
id_type!(ArtistId);
id_type!(TrackId);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Continent {
    Africa,
    Asia,
    Europe,
    NorthAmerica,
    Oceania,
    SouthAmerica,
}

impl Continent {
    pub const ALL: [Continent; 6] = [
        Continent::Africa,
        Continent::Asia,
        Continent::Europe,
        Continent::NorthAmerica,
        Continent::Oceania,
        Continent::SouthAmerica,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Continent::Africa => "Africa",
            Continent::Asia => "Asia",
            Continent::Europe => "Europe",
            Continent::NorthAmerica => "North America",
            Continent::Oceania => "Oceania",
            Continent::SouthAmerica => "South America",
        }
    }
}

impl fmt::Display for Continent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Longitude/latitude pair in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coordinates {
    pub longitude: f64,
    pub latitude: f64,
}

impl Coordinates {
    pub fn new(longitude: f64, latitude: f64) -> Self {
        Self { longitude, latitude }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationRecord {
    pub location_id: LocationId,
    pub city: String,
    pub country: String,
    /// ISO-3166 alpha-2.
    pub country_code: String,
    pub continent: Continent,
    pub coordinates: Coordinates,
    pub population: Option<u64>,
    pub country_gdp: Option<f64>,
    /// Standard UTC offset of the location in minutes. When absent the
    /// offset is estimated from longitude.
    #[serde(default)]
    pub utc_offset_min: Option<i32>,
}

impl LocationRecord {
    pub fn utc_offset(&self) -> FixedOffset {
        let minutes = self
            .utc_offset_min
            .unwrap_or_else(|| ((self.coordinates.longitude / 15.0).round() as i32) * 60);
        FixedOffset::east_opt(minutes * 60).unwrap_or_else(|| FixedOffset::east_opt(0).unwrap())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Band {
    #[serde(rename = "FM")]
    Fm,
    #[serde(rename = "AM")]
    Am,
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Band::Fm => "FM",
            Band::Am => "AM",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    Webcast,
    Simulcast,
}

/// Broadcast form of a station. Kept as a flat struct so that inconsistent
/// combinations read from external sources can be represented and reported by
/// validation instead of failing to deserialize.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationForm {
    pub kind: FormKind,
    pub band: Option<Band>,
    /// MHz for FM, kHz for AM.
    pub frequency: Option<f64>,
}

impl StationForm {
    pub fn webcast() -> Self {
        Self {
            kind: FormKind::Webcast,
            band: None,
            frequency: None,
        }
    }

    pub fn simulcast(band: Band, frequency: f64) -> Self {
        Self {
            kind: FormKind::Simulcast,
            band: Some(band),
            frequency: Some(frequency),
        }
    }
}

impl fmt::Display for StationForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.band, self.frequency) {
            (FormKind::Webcast, _, _) => f.write_str("Webcast"),
            (FormKind::Simulcast, Some(band), Some(freq)) => write!(f, "Simulcast ({band} {freq})"),
            (FormKind::Simulcast, _, _) => f.write_str("Simulcast"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReviewStatus {
    #[default]
    Unreviewed,
    Reviewed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationRecord {
    pub station_id: StationId,
    pub name: String,
    pub location_id: LocationId,
    pub form: StationForm,
    #[serde(default)]
    pub formats: Vec<String>,
    #[serde(default)]
    pub genres: Vec<String>,
    pub website: Option<String>,
    #[serde(default)]
    pub review_status: ReviewStatus,
    pub reliability_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub event_id: EventId,
    pub station_id: StationId,
    /// Local wall-clock time at the station, with its UTC offset.
    pub time_at_station: DateTime<FixedOffset>,
    pub description: String,
    pub reliability: Option<f64>,
    pub artist_id: Option<ArtistId>,
    pub track_id: Option<TrackId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtistType {
    MusicalArtist,
    Group,
    Other(String),
}

impl fmt::Display for ArtistType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArtistType::MusicalArtist => f.write_str("musical artist"),
            ArtistType::Group => f.write_str("group"),
            ArtistType::Other(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupMember {
    pub name: String,
    pub gender: Option<String>,
    pub ethnicity: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtistRecord {
    pub artist_id: ArtistId,
    pub name: String,
    pub artist_type: ArtistType,
    pub gender: Option<String>,
    pub country: Option<String>,
    #[serde(default)]
    pub genres: Vec<String>,
    #[serde(default)]
    pub instruments: Vec<String>,
    pub members: Option<Vec<GroupMember>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Major,
    Minor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyMode {
    pub tonic: String,
    pub mode: Mode,
}

impl fmt::Display for KeyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            Mode::Major => "major",
            Mode::Minor => "minor",
        };
        write!(f, "{} {}", self.tonic, mode)
    }
}

/// Per-track audio descriptors, each on a 0..1 scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AudioFeatures {
    pub danceability: f64,
    pub speechiness: f64,
    pub acousticness: f64,
    pub liveness: f64,
    pub instrumentalness: f64,
    pub valence: f64,
    pub arousal: f64,
}

impl AudioFeatures {
    pub const PCA_FIELDS: [&'static str; 5] = [
        "danceability",
        "speechiness",
        "acousticness",
        "liveness",
        "instrumentalness",
    ];

    pub const ALL_FIELDS: [&'static str; 7] = [
        "danceability",
        "speechiness",
        "acousticness",
        "liveness",
        "instrumentalness",
        "valence",
        "arousal",
    ];

    /// The five descriptors that feed the principal-components view.
    pub fn pca_vector(&self) -> [f64; 5] {
        [
            self.danceability,
            self.speechiness,
            self.acousticness,
            self.liveness,
            self.instrumentalness,
        ]
    }

    pub fn named(&self) -> [(&'static str, f64); 7] {
        [
            ("danceability", self.danceability),
            ("speechiness", self.speechiness),
            ("acousticness", self.acousticness),
            ("liveness", self.liveness),
            ("instrumentalness", self.instrumentalness),
            ("valence", self.valence),
            ("arousal", self.arousal),
        ]
    }
}

/// External streaming link shown in the listen panel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListenLink {
    pub platform: String,
    pub url: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackRecord {
    pub track_id: TrackId,
    pub title: String,
    pub duration_s: Option<u32>,
    pub year_released: Option<i32>,
    pub key_mode: Option<KeyMode>,
    pub language: Option<String>,
    pub features: Option<AudioFeatures>,
    pub popularity: Option<f64>,
    #[serde(default)]
    pub listen_links: Vec<ListenLink>,
}

/// Any row of the five tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "table", rename_all = "snake_case")]
pub enum Record {
    Location(LocationRecord),
    Station(StationRecord),
    Event(EventRecord),
    Artist(ArtistRecord),
    Track(TrackRecord),
}

impl Record {
    pub fn table(&self) -> &'static str {
        match self {
            Record::Location(_) => "location",
            Record::Station(_) => "station",
            Record::Event(_) => "event",
            Record::Artist(_) => "artist",
            Record::Track(_) => "track",
        }
    }

    pub fn id(&self) -> &str {
        match self {
            Record::Location(r) => r.location_id.as_str(),
            Record::Station(r) => r.station_id.as_str(),
            Record::Event(r) => r.event_id.as_str(),
            Record::Artist(r) => r.artist_id.as_str(),
            Record::Track(r) => r.track_id.as_str(),
        }
    }
}

impl From<LocationRecord> for Record {
    fn from(r: LocationRecord) -> Self {
        Record::Location(r)
    }
}

impl From<StationRecord> for Record {
    fn from(r: StationRecord) -> Self {
        Record::Station(r)
    }
}

impl From<EventRecord> for Record {
    fn from(r: EventRecord) -> Self {
        Record::Event(r)
    }
}

impl From<ArtistRecord> for Record {
    fn from(r: ArtistRecord) -> Self {
        Record::Artist(r)
    }
}

impl From<TrackRecord> for Record {
    fn from(r: TrackRecord) -> Self {
        Record::Track(r)
    }
}
