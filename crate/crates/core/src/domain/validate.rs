use std::fmt;

use chrono::Datelike;
use serde::{Deserialize, Serialize};

use super::continent::continent_for;
use super::records::*;

pub const MIN_RELEASE_YEAR: i32 = 1850;

/// One broken invariant: the offending field and the rule it failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub field: String,
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

struct Collector(Vec<Violation>);

impl Collector {
    fn check(&mut self, ok: bool, field: &str, rule: impl Into<String>) {
        if !ok {
            self.0.push(Violation {
                field: field.to_string(),
                rule: rule.into(),
            });
        }
    }

    fn fraction(&mut self, value: Option<f64>, field: &str) {
        if let Some(v) = value {
            self.check((0.0..=1.0).contains(&v), field, "must lie in [0, 1]");
        }
    }
}

/// Checks every record-local invariant. Never fails; an empty list means the
/// record is valid. Release years are bounded by the current calendar year.
pub fn validate_record(record: &Record) -> Vec<Violation> {
    validate_record_in_year(record, chrono::Utc::now().year())
}

/// Same as [`validate_record`] with an explicit upper bound for release years.
pub fn validate_record_in_year(record: &Record, current_year: i32) -> Vec<Violation> {
    let mut c = Collector(Vec::new());
    match record {
        Record::Location(r) => location(&mut c, r),
        Record::Station(r) => station(&mut c, r),
        Record::Event(r) => event(&mut c, r),
        Record::Artist(r) => artist(&mut c, r),
        Record::Track(r) => track(&mut c, r, current_year),
    }
    c.0
}

fn location(c: &mut Collector, r: &LocationRecord) {
    c.check(!r.location_id.0.is_empty(), "location_id", "must be nonempty");
    let lon = r.coordinates.longitude;
    let lat = r.coordinates.latitude;
    c.check(
        (-180.0..=180.0).contains(&lon),
        "coordinates.longitude",
        "must lie in [-180, 180]",
    );
    c.check(
        (-90.0..=90.0).contains(&lat),
        "coordinates.latitude",
        "must lie in [-90, 90]",
    );
    let code_ok = r.country_code.len() == 2 && r.country_code.bytes().all(|b| b.is_ascii_uppercase());
    c.check(code_ok, "country_code", "must be an upper-case ISO-3166 alpha-2 code");
    if code_ok {
        match continent_for(&r.country_code) {
            Some(expected) => c.check(
                expected == r.continent,
                "continent",
                format!("country {} belongs to {}", r.country_code, expected),
            ),
            None => c.check(false, "country_code", "not present in the continent lookup table"),
        }
    }
    if let Some(gdp) = r.country_gdp {
        c.check(
            gdp.is_finite() && gdp >= 0.0,
            "country_gdp",
            "must be a nonnegative number",
        );
    }
    if let Some(offset) = r.utc_offset_min {
        c.check(
            (-14 * 60..=14 * 60).contains(&offset),
            "utc_offset_min",
            "must lie within ±14 hours",
        );
    }
}

fn station(c: &mut Collector, r: &StationRecord) {
    c.check(!r.station_id.0.is_empty(), "station_id", "must be nonempty");
    c.check(!r.location_id.0.is_empty(), "location_id", "must be nonempty");
    match r.form.kind {
        FormKind::Webcast => {
            c.check(
                r.form.frequency.is_none(),
                "form.frequency",
                "webcast carries no frequency",
            );
            c.check(r.form.band.is_none(), "form.band", "webcast carries no band");
        }
        FormKind::Simulcast => {
            c.check(
                r.form.frequency.is_some_and(|f| f.is_finite() && f > 0.0),
                "form.frequency",
                "simulcast requires a positive frequency",
            );
            c.check(r.form.band.is_some(), "form.band", "simulcast requires a band");
        }
    }
    c.fraction(r.reliability_pct, "reliability_pct");
    if r.reliability_pct.is_some() {
        c.check(
            r.review_status == ReviewStatus::Reviewed,
            "reliability_pct",
            "present only on reviewed stations",
        );
    }
}

fn event(c: &mut Collector, r: &EventRecord) {
    c.check(!r.event_id.0.is_empty(), "event_id", "must be nonempty");
    c.check(!r.description.trim().is_empty(), "description", "must be nonempty");
    c.fraction(r.reliability, "reliability");
    c.check(
        r.reliability.is_some() || (r.artist_id.is_none() && r.track_id.is_none()),
        "reliability",
        "linked events must carry a reliability",
    );
}

fn artist(c: &mut Collector, r: &ArtistRecord) {
    c.check(!r.artist_id.0.is_empty(), "artist_id", "must be nonempty");
    c.check(!r.name.trim().is_empty(), "name", "must be nonempty");
    let has_members = r.members.as_ref().is_some_and(|m| !m.is_empty());
    c.check(
        !has_members || r.artist_type == ArtistType::Group,
        "members",
        "only groups list members",
    );
}

fn is_pitch_class(tonic: &str) -> bool {
    let mut chars = tonic.chars();
    let Some(letter) = chars.next() else {
        return false;
    };
    if !('A'..='G').contains(&letter) {
        return false;
    }
    let rest: String = chars.collect();
    matches!(rest.as_str(), "" | "#" | "b" | "♯" | "♭")
}

fn track(c: &mut Collector, r: &TrackRecord, current_year: i32) {
    c.check(!r.track_id.0.is_empty(), "track_id", "must be nonempty");
    c.check(!r.title.trim().is_empty(), "title", "must be nonempty");
    if let Some(d) = r.duration_s {
        c.check(d > 0, "duration_s", "must be positive when present");
    }
    if let Some(y) = r.year_released {
        c.check(
            (MIN_RELEASE_YEAR..=current_year).contains(&y),
            "year_released",
            format!("must lie in [{MIN_RELEASE_YEAR}, {current_year}]"),
        );
    }
    if let Some(k) = &r.key_mode {
        c.check(
            is_pitch_class(&k.tonic),
            "key_mode.tonic",
            "must be a pitch class such as C or F#",
        );
    }
    if let Some(f) = &r.features {
        for (name, value) in f.named() {
            if !(0.0..=1.0).contains(&value) {
                c.check(false, &format!("features.{name}"), "must lie in [0, 1]");
            }
        }
    }
    if let Some(p) = r.popularity {
        c.check((0.0..=100.0).contains(&p), "popularity", "must lie in [0, 100]");
    }
}
