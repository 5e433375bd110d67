//! Frozen country → continent lookup shipped with the crate.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::records::Continent;

const TABLE: &str = include_str!("../../data/country_continents.csv");

fn table() -> &'static HashMap<String, Continent> {
    static MAP: OnceLock<HashMap<String, Continent>> = OnceLock::new();
    MAP.get_or_init(|| {
        TABLE
            .lines()
            .skip(1)
            .filter(|l| !l.trim().is_empty())
            .map(|line| {
                let (code, continent) = line.split_once(',').expect("malformed continent table");
                let continent = match continent.trim() {
                    "africa" => Continent::Africa,
                    "asia" => Continent::Asia,
                    "europe" => Continent::Europe,
                    "north_america" => Continent::NorthAmerica,
                    "oceania" => Continent::Oceania,
                    "south_america" => Continent::SouthAmerica,
                    other => panic!("unknown continent {other:?} in bundled table"),
                };
                (code.trim().to_string(), continent)
            })
            .collect()
    })
}

/// Continent for an ISO-3166 alpha-2 code (case-insensitive).
pub fn continent_for(country_code: &str) -> Option<Continent> {
    table().get(&country_code.trim().to_ascii_uppercase()).copied()
}

/// Every code in the bundled table, sorted.
pub fn country_codes() -> Vec<&'static str> {
    let mut codes: Vec<&'static str> = table().keys().map(String::as_str).collect();
    codes.sort_unstable();
    codes
}
