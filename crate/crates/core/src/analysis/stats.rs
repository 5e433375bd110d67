use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::domain::Continent;
use crate::store::Corpus;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinentRow {
    pub continent: Continent,
    pub stations: usize,
    pub countries: usize,
}

/// Stations and countries per continent. Every continent appears, in
/// alphabetical order, even when empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinentTable {
    pub rows: Vec<ContinentRow>,
    pub total_stations: usize,
    /// Distinct country codes among station locations.
    pub countries: usize,
}

impl ContinentTable {
    pub fn stations_in(&self, c: Continent) -> usize {
        self.rows.iter().find(|r| r.continent == c).map_or(0, |r| r.stations)
    }
}

pub fn continent_table(corpus: &Corpus) -> ContinentTable {
    let mut stations: BTreeMap<Continent, usize> = BTreeMap::new();
    let mut countries: BTreeMap<Continent, BTreeSet<&str>> = BTreeMap::new();
    let mut all_countries = BTreeSet::new();
    let mut total = 0;
    for s in corpus.stations() {
        let Some(loc) = corpus.location(&s.location_id) else {
            continue;
        };
        *stations.entry(loc.continent).or_default() += 1;
        countries.entry(loc.continent).or_default().insert(&loc.country_code);
        all_countries.insert(loc.country_code.as_str());
        total += 1;
    }
    ContinentTable {
        rows: Continent::ALL
            .into_iter()
            .map(|c| ContinentRow {
                continent: c,
                stations: stations.get(&c).copied().unwrap_or(0),
                countries: countries.get(&c).map_or(0, |s| s.len()),
            })
            .collect(),
        total_stations: total,
        countries: all_countries.len(),
    }
}
