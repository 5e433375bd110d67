//! Event-table CSV with a fixed column dictionary. Every column carries the
//! provenance of its values; public-domain exports drop the columns that come
//! from commercial music libraries.

use std::collections::HashMap;
use std::str::FromStr;

use chrono::DateTime;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::*;
use crate::store::EventRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Public station directory.
    StationDirectory,
    /// Public-domain country and city geography.
    Geography,
    /// Text sent by the station's stream encoder.
    StreamEncoder,
    /// Computed by this system (matching scores, review results).
    Derived,
    /// Open encyclopedic music metadata.
    OpenEncyclopedia,
    /// Commercial streaming-library metadata; not redistributable.
    CommercialLibrary,
}

impl Provenance {
    pub fn restricted(self) -> bool {
        self == Provenance::CommercialLibrary
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnSet {
    Full,
    PublicDomain,
}

impl FromStr for ColumnSet {
    type Err = CsvError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(ColumnSet::Full),
            "public_domain" | "public-domain" => Ok(ColumnSet::PublicDomain),
            other => Err(CsvError::ColumnSet(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Column {
    pub name: &'static str,
    pub provenance: Provenance,
    pub description: &'static str,
}

const fn col(name: &'static str, provenance: Provenance, description: &'static str) -> Column {
    Column {
        name,
        provenance,
        description,
    }
}

use Provenance::*;

/// The column dictionary, in file order.
pub const COLUMNS: &[Column] = &[
    col("event_id", Derived, "event identifier"),
    col(
        "time_at_station",
        StreamEncoder,
        "local capture time, RFC 3339 with offset",
    ),
    col("description", StreamEncoder, "raw stream description"),
    col("reliability", Derived, "match similarity on a 0-1 scale"),
    col("station_id", StationDirectory, "station identifier"),
    col("station_name", StationDirectory, "station name"),
    col("station_form", StationDirectory, "webcast or simulcast"),
    col("station_band", StationDirectory, "FM or AM"),
    col("station_frequency", StationDirectory, "MHz for FM, kHz for AM"),
    col("station_formats", StationDirectory, "JSON array of programming formats"),
    col("station_genres", StationDirectory, "JSON array of genres"),
    col("station_website", StationDirectory, "station URL"),
    col("review_status", Derived, "unreviewed or reviewed"),
    col(
        "station_reliability_pct",
        Derived,
        "share of reliable events at the station",
    ),
    col("location_id", Geography, "location identifier"),
    col("city", Geography, "city"),
    col("country", Geography, "country name"),
    col("country_code", Geography, "ISO-3166 alpha-2"),
    col("continent", Geography, "continent"),
    col("longitude", Geography, "degrees"),
    col("latitude", Geography, "degrees"),
    col("population", Geography, "city population"),
    col("country_gdp", Geography, "country GDP"),
    col("utc_offset_min", Geography, "standard UTC offset in minutes"),
    col("artist_id", Derived, "artist identifier"),
    col("artist_name", OpenEncyclopedia, "artist name"),
    col("artist_type", OpenEncyclopedia, "musical_artist, group or other:<text>"),
    col("artist_gender", OpenEncyclopedia, "gender"),
    col("artist_country", OpenEncyclopedia, "country of origin"),
    col("artist_genres", OpenEncyclopedia, "JSON array of genres"),
    col("artist_instruments", OpenEncyclopedia, "JSON array of instruments"),
    col("artist_members", OpenEncyclopedia, "JSON array of group members"),
    col("track_id", Derived, "track identifier"),
    col("track_title", OpenEncyclopedia, "track title"),
    col("duration", CommercialLibrary, "track length, MM:SS or H:MM:SS"),
    col("year_released", OpenEncyclopedia, "release year"),
    col("key_mode", CommercialLibrary, "tonic and mode, e.g. C minor"),
    col("language", OpenEncyclopedia, "lyrics language"),
    col("danceability", CommercialLibrary, "0-1"),
    col("speechiness", CommercialLibrary, "0-1"),
    col("acousticness", CommercialLibrary, "0-1"),
    col("liveness", CommercialLibrary, "0-1"),
    col("instrumentalness", CommercialLibrary, "0-1"),
    col("valence", CommercialLibrary, "0-1"),
    col("arousal", CommercialLibrary, "0-1"),
    col("popularity", CommercialLibrary, "0-100"),
    col("listen_links", CommercialLibrary, "JSON array of {platform, url}"),
];

pub fn columns(set: ColumnSet) -> Vec<&'static Column> {
    COLUMNS
        .iter()
        .filter(|c| set == ColumnSet::Full || !c.provenance.restricted())
        .collect()
}

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("unknown export scope {0:?}")]
    ColumnSet(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row}, column {column}: {message}")]
    Cell {
        row: usize,
        column: String,
        message: String,
    },
    #[error("missing required column {0}")]
    MissingColumn(&'static str),
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("cell serializes")
}

fn artist_type_cell(t: &ArtistType) -> String {
    match t {
        ArtistType::MusicalArtist => "musical_artist".into(),
        ArtistType::Group => "group".into(),
        ArtistType::Other(s) => format!("other:{s}"),
    }
}

fn cell(row: &EventRow, name: &str) -> String {
    let e = &row.event;
    let s = &row.station;
    let l = &row.location;
    let a = row.artist.as_ref();
    let t = row.track.as_ref();
    let f = t.and_then(|t| t.features);
    match name {
        "event_id" => e.event_id.to_string(),
        "time_at_station" => e.time_at_station.to_rfc3339(),
        "description" => e.description.clone(),
        "reliability" => opt(&e.reliability),
        "station_id" => s.station_id.to_string(),
        "station_name" => s.name.clone(),
        "station_form" => json(&s.form.kind).trim_matches('"').to_string(),
        "station_band" => opt(&s.form.band),
        "station_frequency" => opt(&s.form.frequency),
        "station_formats" => json(&s.formats),
        "station_genres" => json(&s.genres),
        "station_website" => opt(&s.website),
        "review_status" => json(&s.review_status).trim_matches('"').to_string(),
        "station_reliability_pct" => opt(&s.reliability_pct),
        "location_id" => l.location_id.to_string(),
        "city" => l.city.clone(),
        "country" => l.country.clone(),
        "country_code" => l.country_code.clone(),
        "continent" => json(&l.continent).trim_matches('"').to_string(),
        "longitude" => l.coordinates.longitude.to_string(),
        "latitude" => l.coordinates.latitude.to_string(),
        "population" => opt(&l.population),
        "country_gdp" => opt(&l.country_gdp),
        "utc_offset_min" => opt(&l.utc_offset_min),
        "artist_id" => opt(&a.map(|a| &a.artist_id)),
        "artist_name" => opt(&a.map(|a| &a.name)),
        "artist_type" => a.map(|a| artist_type_cell(&a.artist_type)).unwrap_or_default(),
        "artist_gender" => opt(&a.and_then(|a| a.gender.as_ref())),
        "artist_country" => opt(&a.and_then(|a| a.country.as_ref())),
        "artist_genres" => a.map(|a| json(&a.genres)).unwrap_or_default(),
        "artist_instruments" => a.map(|a| json(&a.instruments)).unwrap_or_default(),
        "artist_members" => a.and_then(|a| a.members.as_ref()).map(json).unwrap_or_default(),
        "track_id" => opt(&t.map(|t| &t.track_id)),
        "track_title" => opt(&t.map(|t| &t.title)),
        "duration" => t.and_then(|t| t.duration_s).map(format_duration).unwrap_or_default(),
        "year_released" => opt(&t.and_then(|t| t.year_released)),
        "key_mode" => opt(&t.and_then(|t| t.key_mode.as_ref())),
        "language" => opt(&t.and_then(|t| t.language.as_ref())),
        "danceability" => opt(&f.map(|f| f.danceability)),
        "speechiness" => opt(&f.map(|f| f.speechiness)),
        "acousticness" => opt(&f.map(|f| f.acousticness)),
        "liveness" => opt(&f.map(|f| f.liveness)),
        "instrumentalness" => opt(&f.map(|f| f.instrumentalness)),
        "valence" => opt(&f.map(|f| f.valence)),
        "arousal" => opt(&f.map(|f| f.arousal)),
        "popularity" => opt(&t.and_then(|t| t.popularity)),
        "listen_links" => t.map(|t| json(&t.listen_links)).unwrap_or_default(),
        other => unreachable!("column {other} missing from the dictionary"),
    }
}

/// RFC 4180 CSV (CRLF line ends, quotes doubled) with a header row. Empty
/// cells mean absent values; list cells hold JSON arrays.
pub fn export_csv(rows: &[EventRow], set: ColumnSet) -> Vec<u8> {
    let cols = columns(set);
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    w.write_record(cols.iter().map(|c| c.name)).expect("in-memory write");
    for row in rows {
        w.write_record(cols.iter().map(|c| cell(row, c.name)))
            .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

struct Reader<'a> {
    index: HashMap<&'a str, usize>,
    record: &'a csv::StringRecord,
    row: usize,
}

impl Reader<'_> {
    fn raw(&self, name: &str) -> Option<&str> {
        self.index
            .get(name)
            .and_then(|&i| self.record.get(i))
            .filter(|s| !s.is_empty())
    }

    fn bad(&self, name: &str, message: impl ToString) -> CsvError {
        CsvError::Cell {
            row: self.row,
            column: name.to_string(),
            message: message.to_string(),
        }
    }

    fn text(&self, name: &str) -> Option<String> {
        self.raw(name).map(str::to_string)
    }

    fn required(&self, name: &'static str) -> Result<String, CsvError> {
        if !self.index.contains_key(name) {
            return Err(CsvError::MissingColumn(name));
        }
        Ok(self.text(name).unwrap_or_default())
    }

    fn parse<T: FromStr>(&self, name: &str) -> Result<Option<T>, CsvError>
    where
        T::Err: ToString,
    {
        self.raw(name)
            .map(|s| s.parse::<T>().map_err(|e| self.bad(name, e)))
            .transpose()
    }

    fn json<T: DeserializeOwned>(&self, name: &str) -> Result<Option<T>, CsvError> {
        self.raw(name)
            .map(|s| serde_json::from_str(s).map_err(|e| self.bad(name, e)))
            .transpose()
    }

    fn token<T: DeserializeOwned>(&self, name: &str) -> Result<Option<T>, CsvError> {
        self.raw(name)
            .map(|s| serde_json::from_value(serde_json::Value::String(s.into())).map_err(|e| self.bad(name, e)))
            .transpose()
    }
}

fn parse_key_mode(s: &str) -> Option<KeyMode> {
    let (tonic, mode) = s.rsplit_once(' ')?;
    let mode = match mode {
        "major" => Mode::Major,
        "minor" => Mode::Minor,
        _ => return None,
    };
    Some(KeyMode {
        tonic: tonic.to_string(),
        mode,
    })
}

fn parse_artist_type(s: &str) -> ArtistType {
    match s {
        "musical_artist" => ArtistType::MusicalArtist,
        "group" => ArtistType::Group,
        other => ArtistType::Other(other.strip_prefix("other:").unwrap_or(other).to_string()),
    }
}

fn read_row(r: &Reader) -> Result<EventRow, CsvError> {
    let time = r.required("time_at_station")?;
    let time_at_station = DateTime::parse_from_rfc3339(&time).map_err(|e| r.bad("time_at_station", e))?;
    let artist_id: Option<ArtistId> = r.text("artist_id").map(Into::into);
    let track_id: Option<TrackId> = r.text("track_id").map(Into::into);
    let event = EventRecord {
        event_id: r.required("event_id")?.into(),
        station_id: r.required("station_id")?.into(),
        time_at_station,
        description: r.required("description")?,
        reliability: r.parse("reliability")?,
        artist_id: artist_id.clone(),
        track_id: track_id.clone(),
    };
    let station = StationRecord {
        station_id: event.station_id.clone(),
        name: r.required("station_name")?,
        location_id: r.required("location_id")?.into(),
        form: StationForm {
            kind: r.token("station_form")?.unwrap_or(FormKind::Webcast),
            band: r.token("station_band")?,
            frequency: r.parse("station_frequency")?,
        },
        formats: r.json("station_formats")?.unwrap_or_default(),
        genres: r.json("station_genres")?.unwrap_or_default(),
        website: r.text("station_website"),
        review_status: r.token("review_status")?.unwrap_or_default(),
        reliability_pct: r.parse("station_reliability_pct")?,
    };
    let location = LocationRecord {
        location_id: station.location_id.clone(),
        city: r.required("city")?,
        country: r.required("country")?,
        country_code: r.required("country_code")?,
        continent: r.token("continent")?.ok_or(CsvError::MissingColumn("continent"))?,
        coordinates: Coordinates::new(
            r.parse("longitude")?.ok_or(CsvError::MissingColumn("longitude"))?,
            r.parse("latitude")?.ok_or(CsvError::MissingColumn("latitude"))?,
        ),
        population: r.parse("population")?,
        country_gdp: r.parse("country_gdp")?,
        utc_offset_min: r.parse("utc_offset_min")?,
    };
    let artist = artist_id
        .map(|artist_id| -> Result<ArtistRecord, CsvError> {
            Ok(ArtistRecord {
                artist_id,
                name: r.text("artist_name").unwrap_or_default(),
                artist_type: r
                    .raw("artist_type")
                    .map(parse_artist_type)
                    .unwrap_or(ArtistType::MusicalArtist),
                gender: r.text("artist_gender"),
                country: r.text("artist_country"),
                genres: r.json("artist_genres")?.unwrap_or_default(),
                instruments: r.json("artist_instruments")?.unwrap_or_default(),
                members: r.json("artist_members")?,
            })
        })
        .transpose()?;
    let features = {
        let names = AudioFeatures::ALL_FIELDS;
        let values: Vec<Option<f64>> = names.iter().map(|n| r.parse::<f64>(n)).collect::<Result<_, _>>()?;
        if values.iter().all(Option::is_some) {
            let v: Vec<f64> = values.into_iter().flatten().collect();
            Some(AudioFeatures {
                danceability: v[0],
                speechiness: v[1],
                acousticness: v[2],
                liveness: v[3],
                instrumentalness: v[4],
                valence: v[5],
                arousal: v[6],
            })
        } else {
            None
        }
    };
    let track = track_id
        .map(|track_id| -> Result<TrackRecord, CsvError> {
            Ok(TrackRecord {
                track_id,
                title: r.text("track_title").unwrap_or_default(),
                duration_s: r
                    .raw("duration")
                    .map(|d| parse_duration(d).map_err(|e| r.bad("duration", e)))
                    .transpose()?,
                year_released: r.parse("year_released")?,
                key_mode: r
                    .raw("key_mode")
                    .map(|k| parse_key_mode(k).ok_or_else(|| r.bad("key_mode", "expected '<tonic> major|minor'")))
                    .transpose()?,
                language: r.text("language"),
                features,
                popularity: r.parse("popularity")?,
                listen_links: r.json("listen_links")?.unwrap_or_default(),
            })
        })
        .transpose()?;
    Ok(EventRow {
        event,
        station,
        location,
        artist,
        track,
    })
}

/// Reads a file written by [`export_csv`]. Columns may appear in any order;
/// columns missing from a public-domain export read as absent values.
pub fn import_csv(bytes: &[u8]) -> Result<Vec<EventRow>, CsvError> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(bytes);
    let headers = rdr.headers()?.clone();
    let index: HashMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let reader = Reader {
            index: index.clone(),
            record: &record,
            row: i + 1,
        };
        rows.push(read_row(&reader)?);
    }
    Ok(rows)
}
