//! Sample records: the Johor Bahru / Best FM row used throughout the docs and tests.

use chrono::{DateTime, FixedOffset, NaiveDate, TimeZone};

use super::records::*;

pub fn johor_bahru() -> LocationRecord {
    LocationRecord {
        location_id: "loc-johor-bahru".into(),
        city: "Johor Bahru".into(),
        country: "Malaysia".into(),
        country_code: "MY".into(),
        continent: Continent::Asia,
        coordinates: Coordinates::new(103.6545, 1.4783),
        population: None,
        country_gdp: Some(863e9),
        utc_offset_min: Some(8 * 60),
    }
}

pub fn best_fm_station() -> StationRecord {
    StationRecord {
        station_id: "st-best-fm".into(),
        name: "Best FM".into(),
        location_id: "loc-johor-bahru".into(),
        form: StationForm::simulcast(Band::Fm, 104.1),
        formats: vec!["Adult Contemporary".into()],
        genres: vec!["pop".into(), "Indonesian pop".into()],
        website: Some("http://www.bestfm.com.my".into()),
        review_status: ReviewStatus::Reviewed,
        reliability_pct: None,
    }
}

/// 12/28/2022 9:37 local time in Johor Bahru (UTC+8).
pub fn best_fm_time() -> DateTime<FixedOffset> {
    let tz = FixedOffset::east_opt(8 * 3600).unwrap();
    let naive = NaiveDate::from_ymd_opt(2022, 12, 28)
        .unwrap()
        .and_hms_opt(9, 37, 0)
        .unwrap();
    tz.from_local_datetime(&naive).unwrap()
}

pub fn sutera_event() -> EventRecord {
    EventRecord {
        event_id: "ev-best-fm-0001".into(),
        station_id: "st-best-fm".into(),
        time_at_station: best_fm_time(),
        description: "Aisha Retno \u{2013} Sutera".into(),
        reliability: Some(1.0),
        artist_id: Some("ar-aisha-retno".into()),
        track_id: Some("tr-sutera".into()),
    }
}

pub fn aisha_retno() -> ArtistRecord {
    ArtistRecord {
        artist_id: "ar-aisha-retno".into(),
        name: "Aisha Retno".into(),
        artist_type: ArtistType::MusicalArtist,
        gender: Some("female".into()),
        country: Some("Malaysia".into()),
        genres: vec!["pop".into()],
        instruments: vec!["piano".into(), "voice".into()],
        members: None,
    }
}

pub fn sutera() -> TrackRecord {
    TrackRecord {
        track_id: "tr-sutera".into(),
        title: "Sutera".into(),
        duration_s: Some(198),
        year_released: Some(2022),
        key_mode: Some(KeyMode {
            tonic: "C".into(),
            mode: Mode::Minor,
        }),
        language: Some("Malay".into()),
        features: None,
        popularity: None,
        listen_links: Vec::new(),
    }
}

/// All five linked records of the sample row.
pub fn best_fm() -> (LocationRecord, StationRecord, EventRecord, ArtistRecord, TrackRecord) {
    (
        johor_bahru(),
        best_fm_station(),
        sutera_event(),
        aisha_retno(),
        sutera(),
    )
}
