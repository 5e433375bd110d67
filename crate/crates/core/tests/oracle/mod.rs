//! Reference implementations used by the property and acceptance tests.
//! Each is a direct transcription of the rule it checks, written without
//! calling the code under test.
#![allow(dead_code, clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, TimeDelta, Utc};
use nalgebra::{DMatrix, Matrix5, SymmetricEigen};
use radiometa_core::domain::{EventRecord, StationId};
use radiometa_core::monitor::MonitorConfig;
use radiometa_core::sim::{Payload, ScenarioScript};
use radiometa_core::store::{Corpus, DateRange, EventFilter, EventRow, HexCellRef};
use rand::seq::IndexedRandom;
use rand::Rng;
use sha2::{Digest, Sha256};

pub fn digest(parts: impl IntoIterator<Item = String>) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

// ---- edit distance ----

/// Full-table Wagner-Fischer over Unicode scalar values.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = if a[i - 1] == b[j - 1] { 0 } else { 1 };
            d[i][j] = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
        }
    }
    d[a.len()][b.len()]
}

/// The similarity as an exact fraction (numerator, denominator).
pub fn similarity_ratio(a: &str, b: &str) -> (usize, usize) {
    let m = a.chars().count().max(b.chars().count());
    if m == 0 {
        return (1, 1);
    }
    (m - levenshtein(a, b), m)
}

const ALPHABETS: [&[char]; 6] = [
    &['a', 'b', 'c', 'e', 'o', ' ', '-'],
    &['é', 'ü', 'ñ', 'ø', 'ç', 'ã'],
    &['\u{0301}', '\u{0308}', '\u{0327}'],
    &['日', '本', '語', '音', '楽'],
    &['😀', '🎵', '🇮', '🇩'],
    &['ά', 'Ж', 'ש', 'ع', 'ก'],
];

/// Mixed-script text, including combining marks and astral characters.
pub fn random_text<R: Rng>(rng: &mut R, max_len: usize) -> String {
    let n = rng.random_range(0..=max_len);
    (0..n)
        .map(|_| *ALPHABETS.choose(rng).unwrap().choose(rng).unwrap())
        .collect()
}

// ---- queries ----

pub fn join(corpus: &Corpus, e: &EventRecord) -> EventRow {
    let station = corpus.station(&e.station_id).unwrap().clone();
    let location = corpus.location(&station.location_id).unwrap().clone();
    EventRow {
        event: e.clone(),
        station,
        location,
        artist: e.artist_id.as_ref().map(|a| corpus.artist(a).unwrap().clone()),
        track: e.track_id.as_ref().map(|t| corpus.track(t).unwrap().clone()),
    }
}

fn eq_ci(a: &str, b: &str) -> bool {
    a.to_lowercase() == b.to_lowercase()
}

pub fn filter_hit(f: &EventFilter, row: &EventRow) -> bool {
    let l = &row.location;
    let artist = row.artist.as_ref();
    let track = row.track.as_ref();
    let conds = [
        f.country
            .as_ref()
            .is_none_or(|c| eq_ci(c, &l.country) || eq_ci(c, &l.country_code)),
        f.city.as_ref().is_none_or(|c| eq_ci(c, &l.city)),
        f.station_id.as_ref().is_none_or(|s| *s == row.station.station_id),
        f.text_query.as_ref().is_none_or(|q| {
            let q = q.to_lowercase();
            [
                Some(row.event.description.clone()),
                artist.map(|a| a.name.clone()),
                track.map(|t| t.title.clone()),
            ]
            .into_iter()
            .flatten()
            .any(|s| s.to_lowercase().contains(&q))
        }),
        f.min_reliability
            .is_none_or(|m| row.event.reliability.is_some_and(|r| r >= m)),
        f.date_range.as_ref().is_none_or(|r| {
            let t = row.event.time_at_station.with_timezone(&Utc);
            r.start.with_timezone(&Utc) <= t && t <= r.end.with_timezone(&Utc)
        }),
        f.genre.as_ref().is_none_or(|g| {
            row.station.genres.iter().any(|x| eq_ci(x, g))
                || artist.is_some_and(|a| a.genres.iter().any(|x| eq_ci(x, g)))
        }),
        f.artist_country
            .as_ref()
            .is_none_or(|c| artist.and_then(|a| a.country.as_ref()).is_some_and(|x| eq_ci(x, c))),
        f.hex_cell
            .as_ref()
            .is_none_or(|h| hex_cell(l.coordinates.longitude, l.coordinates.latitude, h.resolution) == (h.q, h.r)),
    ];
    conds.iter().all(|c| *c)
}

/// Scan, filter, sort newest first (ties by event id), cut to `limit`.
pub fn query(corpus: &Corpus, f: &EventFilter, limit: usize) -> Vec<EventRow> {
    let mut rows: Vec<EventRow> = corpus
        .events()
        .map(|e| join(corpus, e))
        .filter(|r| filter_hit(f, r))
        .collect();
    rows.sort_by(|a, b| {
        let (ta, tb) = (
            a.event.time_at_station.with_timezone(&Utc),
            b.event.time_at_station.with_timezone(&Utc),
        );
        tb.cmp(&ta).then_with(|| a.event.event_id.cmp(&b.event.event_id))
    });
    rows.truncate(limit);
    rows
}

fn flip_case<R: Rng>(rng: &mut R, s: &str) -> String {
    if rng.random_bool(0.5) {
        s.to_uppercase()
    } else {
        s.to_lowercase()
    }
}

/// Random conjunction of clauses drawn from values present in `corpus`.
pub fn random_filter<R: Rng>(rng: &mut R, corpus: &Corpus) -> EventFilter {
    let events: Vec<&EventRecord> = corpus.events().collect();
    let row = join(corpus, events.choose(rng).unwrap());
    let p = 0.3;
    let mut f = EventFilter::default();
    if rng.random_bool(p) {
        f.country = Some(if rng.random_bool(0.5) {
            flip_case(rng, &row.location.country)
        } else {
            row.location.country_code.clone()
        });
    }
    if rng.random_bool(p / 2.0) {
        f.city = Some(flip_case(rng, &row.location.city));
    }
    if rng.random_bool(p / 2.0) {
        f.station_id = Some(row.station.station_id.clone());
    }
    if rng.random_bool(p) {
        let chars: Vec<char> = row.event.description.chars().collect();
        let a = rng.random_range(0..chars.len());
        let b = (a + rng.random_range(1..=3)).min(chars.len());
        f.text_query = Some(flip_case(rng, &chars[a..b].iter().collect::<String>()));
    }
    if rng.random_bool(p) {
        f.min_reliability = Some(*[0.0, 0.5, 0.89999, 0.9, 1.0].choose(rng).unwrap());
    }
    if rng.random_bool(p) {
        let t = row.event.time_at_station;
        let span = TimeDelta::hours(rng.random_range(0..24 * 40));
        f.date_range = Some(DateRange {
            start: t - TimeDelta::hours(rng.random_range(0..24 * 20)),
            end: t + span,
        });
    }
    if rng.random_bool(p) {
        let g = *["pop", "rock", "jazz", "dangdut", "Indonesian pop"]
            .choose(rng)
            .unwrap();
        f.genre = Some(flip_case(rng, g));
    }
    if rng.random_bool(p / 2.0) {
        let c = *["Indonesia", "Malaysia", "Brazil", "Germany"].choose(rng).unwrap();
        f.artist_country = Some(flip_case(rng, c));
    }
    if rng.random_bool(p / 2.0) {
        let res = *[0.5, 2.0, 10.0].choose(rng).unwrap();
        let (q, r) = hex_cell(
            row.location.coordinates.longitude,
            row.location.coordinates.latitude,
            res,
        );
        f.hex_cell = Some(HexCellRef { resolution: res, q, r });
    }
    f
}

/// Events with reliability ≥ threshold, by id.
pub fn reliable_ids(corpus: &Corpus, threshold: f64) -> BTreeSet<String> {
    corpus
        .events()
        .filter(|e| e.reliability.is_some_and(|r| r >= threshold))
        .map(|e| e.event_id.0.clone())
        .collect()
}

// ---- hex grid ----

pub fn hex_center(q: i64, r: i64, size: f64) -> (f64, f64) {
    let w = 3f64.sqrt() * size;
    (w * (q as f64 + r as f64 / 2.0), 1.5 * size * r as f64)
}

/// Cell whose center is nearest, found by searching the neighborhood of a
/// rough estimate.
pub fn hex_cell(lon: f64, lat: f64, size: f64) -> (i64, i64) {
    let r0 = (lat / (1.5 * size)).round() as i64;
    let q0 = (lon / (3f64.sqrt() * size) - r0 as f64 / 2.0).round() as i64;
    let mut best = (f64::INFINITY, (0, 0));
    for r in r0 - 2..=r0 + 2 {
        for q in q0 - 2..=q0 + 2 {
            let (x, y) = hex_center(q, r, size);
            let d = (x - lon).powi(2) + (y - lat).powi(2);
            if d < best.0 {
                best = (d, (q, r));
            }
        }
    }
    best.1
}

/// cell → (station count, per-country counts)
pub fn hex_bins(points: &[(f64, f64, String)], size: f64) -> BTreeMap<(i64, i64), (usize, BTreeMap<String, usize>)> {
    let mut out: BTreeMap<(i64, i64), (usize, BTreeMap<String, usize>)> = BTreeMap::new();
    for (lon, lat, cc) in points {
        let e = out.entry(hex_cell(*lon, *lat, size)).or_default();
        e.0 += 1;
        *e.1.entry(cc.clone()).or_default() += 1;
    }
    out
}

// ---- map dots ----

/// (lon, lat, count, contains_selected), sorted by count desc then lon, lat.
pub type Dot = (f64, f64, usize, bool);

/// Exact-coordinate groups joined transitively at distance ≤ radius, O(n²).
pub fn dots(rows: &[EventRow], radius: f64, selected: &[String]) -> Vec<Dot> {
    let mut groups: Vec<(f64, f64, usize, bool)> = Vec::new();
    for row in rows {
        let (x, y) = (row.location.coordinates.longitude, row.location.coordinates.latitude);
        let sel = selected.contains(&row.event.event_id.0);
        match groups.iter_mut().find(|g| g.0 == x && g.1 == y) {
            Some(g) => {
                g.2 += 1;
                g.3 |= sel;
            }
            None => groups.push((x, y, 1, sel)),
        }
    }
    let n = groups.len();
    let mut component = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if component[s] != usize::MAX {
            continue;
        }
        component[s] = s;
        let mut stack = vec![s];
        let mut members = Vec::new();
        while let Some(i) = stack.pop() {
            members.push(i);
            for j in 0..n {
                let d = ((groups[i].0 - groups[j].0).powi(2) + (groups[i].1 - groups[j].1).powi(2)).sqrt();
                if component[j] == usize::MAX && d <= radius {
                    component[j] = s;
                    stack.push(j);
                }
            }
        }
        let count: usize = members.iter().map(|&i| groups[i].2).sum();
        let lon = members.iter().map(|&i| groups[i].0 * groups[i].2 as f64).sum::<f64>() / count as f64;
        let lat = members.iter().map(|&i| groups[i].1 * groups[i].2 as f64).sum::<f64>() / count as f64;
        out.push((lon, lat, count, members.iter().any(|&i| groups[i].3)));
    }
    out.sort_by(|a, b| b.2.cmp(&a.2).then(a.0.total_cmp(&b.0)).then(a.1.total_cmp(&b.1)));
    out
}

// ---- bars and histograms ----

/// Labels per row for the fields the tests group by.
pub fn labels(row: &EventRow, field: &str) -> Vec<String> {
    let a = row.artist.as_ref();
    let t = row.track.as_ref();
    match field {
        "country" => vec![row.location.country.clone()],
        "city" => vec![row.location.city.clone()],
        "station_genre" => row.station.genres.clone(),
        "artist_country" => a.and_then(|a| a.country.clone()).into_iter().collect(),
        "artist_genre" => a.map(|a| a.genres.clone()).unwrap_or_default(),
        "language" => t.and_then(|t| t.language.clone()).into_iter().collect(),
        "year_released" => t
            .and_then(|t| t.year_released)
            .map(|y| y.to_string())
            .into_iter()
            .collect(),
        other => panic!("oracle has no labels for {other}"),
    }
}

pub const BAR_FIELDS: [&str; 7] = [
    "country",
    "city",
    "station_genre",
    "artist_country",
    "artist_genre",
    "language",
    "year_released",
];

/// Count per label; sorted by count desc, then label; first `k`.
pub fn bars(rows: &[EventRow], field: &str, k: usize) -> Vec<(String, usize)> {
    let mut counts: Vec<(String, usize)> = Vec::new();
    for row in rows {
        for l in labels(row, field) {
            match counts.iter_mut().find(|(x, _)| *x == l) {
                Some(c) => c.1 += 1,
                None => counts.push((l, 1)),
            }
        }
    }
    counts.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    counts.truncate(k);
    counts
}

/// (start, end, count) for equal-width bins; last bin closed on the right.
pub fn hist(values: &[f64], k: usize) -> Vec<(f64, f64, usize)> {
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return vec![(min, max, values.len())];
    }
    let edges: Vec<f64> = (0..=k)
        .map(|i| {
            if i == k {
                max
            } else {
                min + (max - min) * i as f64 / k as f64
            }
        })
        .collect();
    (0..k)
        .map(|i| {
            let last = i == k - 1;
            let n = values
                .iter()
                .filter(|&&v| v >= edges[i] && (v < edges[i + 1] || (last && v <= edges[i + 1])))
                .count();
            (edges[i], edges[i + 1], n)
        })
        .collect()
}

// ---- PCA ----

pub struct PcaOracle {
    pub mean: [f64; 5],
    pub components: [[f64; 5]; 2],
    pub variances: [f64; 5],
}

/// Dense symmetric eigendecomposition of the n−1 covariance; eigenvectors
/// sorted by eigenvalue and signed so their largest-magnitude entry is positive.
pub fn pca(rows: &[[f64; 5]]) -> PcaOracle {
    let n = rows.len();
    let x = DMatrix::from_fn(n, 5, |i, j| rows[i][j]);
    let mean = x.row_mean();
    let centered = DMatrix::from_fn(n, 5, |i, j| x[(i, j)] - mean[j]);
    let cov: Matrix5<f64> = (centered.transpose() * &centered / (n as f64 - 1.0))
        .fixed_view::<5, 5>(0, 0)
        .into();
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..5).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vec_of = |k: usize| {
        let mut v = [0.0; 5];
        for (j, x) in v.iter_mut().enumerate() {
            *x = eig.eigenvectors[(j, order[k])];
        }
        let big = v
            .iter()
            .cloned()
            .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        if big < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        v
    };
    let mut variances = [0.0; 5];
    for (k, v) in variances.iter_mut().enumerate() {
        *v = eig.eigenvalues[order[k]];
    }
    PcaOracle {
        mean: std::array::from_fn(|j| mean[j]),
        components: [vec_of(0), vec_of(1)],
        variances,
    }
}

// ---- scripts ----

/// Payload at script time `t` by linear scan; `None` once a non-looping
/// script has ended.
pub fn payload_at(script: &ScenarioScript, t: u64) -> Option<&Payload> {
    let t = match (script.looping, script.duration_s) {
        (true, Some(d)) => t % d,
        (false, Some(d)) if t >= d => return None,
        _ => t,
    };
    let mut found = &script.timeline[0].payload;
    for e in &script.timeline {
        if e.start_offset_s <= t {
            found = &e.payload;
        }
    }
    Some(found)
}

/// Expected accepted events for one station: walk the poll grid, skip
/// blackout minutes, drop empty, blacklisted and repeated descriptions.
pub fn expected_events(
    script: &ScenarioScript,
    epoch: DateTime<Utc>,
    start: DateTime<Utc>,
    utc_offset_min: i32,
    monitor: &MonitorConfig,
) -> Vec<(DateTime<Utc>, String)> {
    let w = monitor.blackout_half_width_min as i64;
    let mut out: Vec<(DateTime<Utc>, String)> = Vec::new();
    let mut polls = 0u64;
    let mut t = start;
    while out.len() < monitor.events_per_station as usize && polls < monitor.max_polls.unwrap_or(u64::MAX) {
        let at = t;
        t += TimeDelta::seconds(monitor.poll_interval_s as i64);
        polls += 1;
        let minute = (at.timestamp() + utc_offset_min as i64 * 60).rem_euclid(3600) / 60;
        if minute >= 60 - w || minute < w || (minute >= 30 - w && minute < 30 + w) {
            continue;
        }
        let s = (at - epoch).num_seconds().max(0) as u64;
        let text = match payload_at(script, s) {
            None => break,
            Some(Payload::Title(x) | Payload::Advert(x)) => x.clone(),
            Some(Payload::Blank) => String::new(),
            Some(Payload::Offline) => panic!("oracle does not model offline stations"),
        };
        let lower = text.to_lowercase();
        if text.trim().is_empty() || monitor.blacklist.iter().any(|b| lower.contains(b.as_str())) {
            continue;
        }
        if out.last().is_some_and(|(_, prev)| *prev == text) {
            continue;
        }
        out.push((at, text));
    }
    out
}

pub fn station_offsets(
    locations: &[radiometa_core::domain::LocationRecord],
    stations: &[radiometa_core::domain::StationRecord],
) -> BTreeMap<StationId, i32> {
    stations
        .iter()
        .map(|s| {
            let l = locations.iter().find(|l| l.location_id == s.location_id).unwrap();
            (s.station_id.clone(), l.utc_offset_min.unwrap_or(0))
        })
        .collect()
}
pub mod checks;
