use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::corpus::Corpus;
use super::error::StoreError;
use crate::domain::{Record, ReviewStatus, StationForm, StationId, StationRecord};

/// Additions and removals applied to a list field; additions skip values
/// already present.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ListEdit {
    pub add: Vec<String>,
    pub remove: Vec<String>,
}

impl ListEdit {
    pub fn add<I: IntoIterator<Item = S>, S: Into<String>>(items: I) -> Self {
        Self {
            add: items.into_iter().map(Into::into).collect(),
            remove: Vec::new(),
        }
    }

    fn apply(&self, list: &mut Vec<String>) {
        list.retain(|x| !self.remove.contains(x));
        for a in &self.add {
            if !list.contains(a) {
                list.push(a.clone());
            }
        }
    }
}

/// Corrections an annotator makes while reviewing a station. City and country
/// edits change the station's location record.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StationEdits {
    pub name: Option<String>,
    pub website: Option<String>,
    pub city: Option<String>,
    pub country: Option<String>,
    pub formats: Option<ListEdit>,
    pub genres: Option<ListEdit>,
    pub form: Option<StationForm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum ReviewAction {
    Edited { edits: StationEdits },
    ReliabilityComputed { threshold: f64, reliability_pct: f64 },
}

/// One audit-log line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewEntry {
    pub station_id: StationId,
    pub at: DateTime<Utc>,
    #[serde(flatten)]
    pub action: ReviewAction,
}

/// Records written by a review operation, in commit order.
#[derive(Debug, Clone, PartialEq)]
pub struct ReviewChange {
    pub records: Vec<Record>,
    pub entry: ReviewEntry,
}

impl Corpus {
    fn station_or_missing(&self, id: &StationId) -> Result<&StationRecord, StoreError> {
        self.station(id).ok_or_else(|| StoreError::NotFound {
            table: "station",
            id: id.to_string(),
        })
    }

    /// Computes the rows a review would write without touching the corpus.
    pub fn plan_review(
        &self,
        station_id: &StationId,
        edits: &StationEdits,
        at: DateTime<Utc>,
    ) -> Result<ReviewChange, StoreError> {
        let mut station = self.station_or_missing(station_id)?.clone();
        let mut records = Vec::new();
        if edits.city.is_some() || edits.country.is_some() {
            let mut location =
                self.location(&station.location_id)
                    .cloned()
                    .ok_or_else(|| StoreError::DanglingReference {
                        table: "location",
                        id: station.location_id.to_string(),
                    })?;
            if let Some(city) = &edits.city {
                location.city = city.clone();
            }
            if let Some(country) = &edits.country {
                location.country = country.clone();
            }
            records.push(Record::Location(location));
        }
        if let Some(name) = &edits.name {
            station.name = name.clone();
        }
        if let Some(website) = &edits.website {
            station.website = Some(website.clone());
        }
        if let Some(f) = &edits.formats {
            f.apply(&mut station.formats);
        }
        if let Some(g) = &edits.genres {
            g.apply(&mut station.genres);
        }
        if let Some(form) = edits.form {
            station.form = form;
        }
        station.review_status = ReviewStatus::Reviewed;
        records.push(Record::Station(station));
        Ok(ReviewChange {
            records,
            entry: ReviewEntry {
                station_id: station_id.clone(),
                at,
                action: ReviewAction::Edited { edits: edits.clone() },
            },
        })
    }

    /// Share of the station's matched events whose reliability meets the
    /// threshold. Does not modify the corpus.
    pub fn station_reliability(&self, station_id: &StationId, threshold: f64) -> Result<f64, StoreError> {
        self.station_or_missing(station_id)?;
        let matched: Vec<f64> = self
            .station_events(station_id)
            .iter()
            .filter_map(|e| e.reliability)
            .collect();
        if matched.is_empty() {
            return Err(StoreError::UndefinedReliability(station_id.to_string()));
        }
        let reliable = matched.iter().filter(|&&r| r >= threshold).count();
        Ok(reliable as f64 / matched.len() as f64)
    }

    /// Plans storing the station's reliability share. The figure is the last
    /// step of a station review, so the station is marked reviewed as well.
    pub fn plan_station_reliability(
        &self,
        station_id: &StationId,
        threshold: f64,
        at: DateTime<Utc>,
    ) -> Result<ReviewChange, StoreError> {
        let pct = self.station_reliability(station_id, threshold)?;
        let mut station = self.station_or_missing(station_id)?.clone();
        station.reliability_pct = Some(pct);
        station.review_status = ReviewStatus::Reviewed;
        Ok(ReviewChange {
            records: vec![Record::Station(station)],
            entry: ReviewEntry {
                station_id: station_id.clone(),
                at,
                action: ReviewAction::ReliabilityComputed {
                    threshold,
                    reliability_pct: pct,
                },
            },
        })
    }

    pub fn apply_review(&mut self, change: ReviewChange) -> Result<(), StoreError> {
        self.upsert_batch(change.records)?;
        self.push_review(change.entry);
        Ok(())
    }

    pub fn review_station(
        &mut self,
        station_id: &StationId,
        edits: &StationEdits,
        at: DateTime<Utc>,
    ) -> Result<StationRecord, StoreError> {
        let change = self.plan_review(station_id, edits, at)?;
        self.apply_review(change)?;
        Ok(self.stations[station_id].clone())
    }

    pub fn compute_station_reliability(
        &mut self,
        station_id: &StationId,
        threshold: f64,
        at: DateTime<Utc>,
    ) -> Result<f64, StoreError> {
        let change = self.plan_station_reliability(station_id, threshold, at)?;
        self.apply_review(change)?;
        Ok(self.stations[station_id].reliability_pct.unwrap_or_default())
    }
}
