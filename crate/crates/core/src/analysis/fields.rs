//! Named fields of a joined event row, as used by the chart endpoints.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::AggError;
use crate::store::EventRow;

/// Categorical fields for bar charts. List fields contribute one label per
/// element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CategoryField {
    Country,
    CountryCode,
    Continent,
    City,
    Station,
    StationForm,
    StationFormat,
    StationGenre,
    Artist,
    ArtistType,
    ArtistGender,
    ArtistCountry,
    ArtistGenre,
    Track,
    Language,
    KeyMode,
    YearReleased,
}

impl CategoryField {
    pub const ALL: [CategoryField; 17] = [
        CategoryField::Country,
        CategoryField::CountryCode,
        CategoryField::Continent,
        CategoryField::City,
        CategoryField::Station,
        CategoryField::StationForm,
        CategoryField::StationFormat,
        CategoryField::StationGenre,
        CategoryField::Artist,
        CategoryField::ArtistType,
        CategoryField::ArtistGender,
        CategoryField::ArtistCountry,
        CategoryField::ArtistGenre,
        CategoryField::Track,
        CategoryField::Language,
        CategoryField::KeyMode,
        CategoryField::YearReleased,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CategoryField::Country => "country",
            CategoryField::CountryCode => "country_code",
            CategoryField::Continent => "continent",
            CategoryField::City => "city",
            CategoryField::Station => "station",
            CategoryField::StationForm => "station_form",
            CategoryField::StationFormat => "station_format",
            CategoryField::StationGenre => "station_genre",
            CategoryField::Artist => "artist",
            CategoryField::ArtistType => "artist_type",
            CategoryField::ArtistGender => "artist_gender",
            CategoryField::ArtistCountry => "artist_country",
            CategoryField::ArtistGenre => "artist_genre",
            CategoryField::Track => "track",
            CategoryField::Language => "language",
            CategoryField::KeyMode => "key_mode",
            CategoryField::YearReleased => "year_released",
        }
    }

    /// Labels this row contributes; empty when the field is absent.
    pub fn labels(self, row: &EventRow) -> Vec<String> {
        let artist = row.artist.as_ref();
        let track = row.track.as_ref();
        match self {
            CategoryField::Country => vec![row.location.country.clone()],
            CategoryField::CountryCode => vec![row.location.country_code.clone()],
            CategoryField::Continent => vec![row.location.continent.label().to_string()],
            CategoryField::City => vec![row.location.city.clone()],
            CategoryField::Station => vec![row.station.name.clone()],
            CategoryField::StationForm => vec![row.station.form.to_string()],
            CategoryField::StationFormat => row.station.formats.clone(),
            CategoryField::StationGenre => row.station.genres.clone(),
            CategoryField::Artist => artist.map(|a| a.name.clone()).into_iter().collect(),
            CategoryField::ArtistType => artist.map(|a| a.artist_type.to_string()).into_iter().collect(),
            CategoryField::ArtistGender => artist.and_then(|a| a.gender.clone()).into_iter().collect(),
            CategoryField::ArtistCountry => artist.and_then(|a| a.country.clone()).into_iter().collect(),
            CategoryField::ArtistGenre => artist.map(|a| a.genres.clone()).unwrap_or_default(),
            CategoryField::Track => track.map(|t| t.title.clone()).into_iter().collect(),
            CategoryField::Language => track.and_then(|t| t.language.clone()).into_iter().collect(),
            CategoryField::KeyMode => track
                .and_then(|t| t.key_mode.as_ref())
                .map(|k| k.to_string())
                .into_iter()
                .collect(),
            CategoryField::YearReleased => track
                .and_then(|t| t.year_released)
                .map(|y| y.to_string())
                .into_iter()
                .collect(),
        }
    }
}

impl FromStr for CategoryField {
    type Err = AggError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CategoryField::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| AggError::UnknownField(s.to_string()))
    }
}

/// Numeric fields for histograms and scatter plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NumericField {
    Reliability,
    Popularity,
    YearReleased,
    DurationS,
    Danceability,
    Speechiness,
    Acousticness,
    Liveness,
    Instrumentalness,
    Valence,
    Arousal,
    Longitude,
    Latitude,
}

impl NumericField {
    pub const ALL: [NumericField; 13] = [
        NumericField::Reliability,
        NumericField::Popularity,
        NumericField::YearReleased,
        NumericField::DurationS,
        NumericField::Danceability,
        NumericField::Speechiness,
        NumericField::Acousticness,
        NumericField::Liveness,
        NumericField::Instrumentalness,
        NumericField::Valence,
        NumericField::Arousal,
        NumericField::Longitude,
        NumericField::Latitude,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NumericField::Reliability => "reliability",
            NumericField::Popularity => "popularity",
            NumericField::YearReleased => "year_released",
            NumericField::DurationS => "duration_s",
            NumericField::Danceability => "danceability",
            NumericField::Speechiness => "speechiness",
            NumericField::Acousticness => "acousticness",
            NumericField::Liveness => "liveness",
            NumericField::Instrumentalness => "instrumentalness",
            NumericField::Valence => "valence",
            NumericField::Arousal => "arousal",
            NumericField::Longitude => "longitude",
            NumericField::Latitude => "latitude",
        }
    }

    pub fn value(self, row: &EventRow) -> Option<f64> {
        let track = row.track.as_ref();
        let features = track.and_then(|t| t.features);
        match self {
            NumericField::Reliability => row.event.reliability,
            NumericField::Popularity => track.and_then(|t| t.popularity),
            NumericField::YearReleased => track.and_then(|t| t.year_released).map(f64::from),
            NumericField::DurationS => track.and_then(|t| t.duration_s).map(f64::from),
            NumericField::Danceability => features.map(|f| f.danceability),
            NumericField::Speechiness => features.map(|f| f.speechiness),
            NumericField::Acousticness => features.map(|f| f.acousticness),
            NumericField::Liveness => features.map(|f| f.liveness),
            NumericField::Instrumentalness => features.map(|f| f.instrumentalness),
            NumericField::Valence => features.map(|f| f.valence),
            NumericField::Arousal => features.map(|f| f.arousal),
            NumericField::Longitude => Some(row.location.coordinates.longitude),
            NumericField::Latitude => Some(row.location.coordinates.latitude),
        }
        .filter(|v| v.is_finite())
    }
}

impl FromStr for NumericField {
    type Err = AggError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NumericField::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| AggError::UnknownField(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bar {
    pub label: String,
    pub count: usize,
}

/// Label counts, most frequent first with ties in label order, cut to `top_k`.
pub fn bar_counts(rows: &[EventRow], group_by: CategoryField, top_k: usize) -> Vec<Bar> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for row in rows {
        for label in group_by.labels(row) {
            *counts.entry(label).or_default() += 1;
        }
    }
    let mut bars: Vec<Bar> = counts.into_iter().map(|(label, count)| Bar { label, count }).collect();
    // Stable sort keeps the BTreeMap's label order among equal counts.
    bars.sort_by_key(|b| std::cmp::Reverse(b.count));
    bars.truncate(top_k);
    bars
}

/// Parses `group_by` by name first, so unknown fields fail before any work.
pub fn bar_counts_by_name(rows: &[EventRow], group_by: &str, top_k: usize) -> Result<Vec<Bar>, AggError> {
    Ok(bar_counts(rows, group_by.parse()?, top_k))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub event_id: crate::domain::EventId,
    pub x: f64,
    pub y: f64,
}

/// Rows where both fields are present, in input order.
pub fn scatter(rows: &[EventRow], x: NumericField, y: NumericField) -> Vec<ScatterPoint> {
    rows.iter()
        .filter_map(|row| {
            Some(ScatterPoint {
                event_id: row.event.event_id.clone(),
                x: x.value(row)?,
                y: y.value(row)?,
            })
        })
        .collect()
}

pub fn numeric_values(rows: &[EventRow], field: NumericField) -> Vec<f64> {
    rows.iter().filter_map(|r| field.value(r)).collect()
}
