//! One function per acceptance criterion. Each compares the implementation
//! with the reference code in the parent module and returns a one-line
//! summary, or the first disagreement.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use radiometa_core::analysis::{
    bar_counts_by_name, continent_table, decode_share_url, encode_share_url, export_csv, hex_cell_for,
    hexbin_aggregate, histogram, import_csv, map_dots, numeric_values, pca_fit, pca_view, station_points, ColumnSet,
    NumericField, PcaModel, ShareState, StationPoint,
};
use radiometa_core::domain::*;
use radiometa_core::matcher::{levenshtein, normalized_similarity, select_match, Library, MatchCandidate};
use radiometa_core::monitor::{encode_icy_metadata_block, parse_icy_metadata_block, IcyPayload, MAX_TITLE_BYTES};
use radiometa_core::sim::{synthetic_corpus, SynthParams};
use radiometa_core::store::{corpus_files, export_corpus, import_corpus, Corpus, EventFilter, EventRow};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

pub fn matcher_equivalence(pairs: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for i in 0..pairs {
        let a = super::random_text(&mut r, 24);
        // Half the pairs are near-duplicates, where small distances matter.
        let b = if i % 2 == 0 {
            super::random_text(&mut r, 24)
        } else {
            let mut cs: Vec<char> = a.chars().collect();
            for _ in 0..r.random_range(0..=3) {
                let c = super::random_text(&mut r, 1).chars().next().unwrap_or('x');
                match (r.random_range(0..3), cs.is_empty()) {
                    (0, _) | (_, true) => cs.insert(r.random_range(0..=cs.len()), c),
                    (1, false) => {
                        cs.remove(r.random_range(0..cs.len()));
                    }
                    _ => {
                        let k = r.random_range(0..cs.len());
                        cs[k] = c;
                    }
                }
            }
            cs.into_iter().collect()
        };
        let d = super::levenshtein(&a, &b);
        ensure!(
            levenshtein(&a, &b) == d,
            "levenshtein({a:?}, {b:?}) = {} but oracle says {d}",
            levenshtein(&a, &b)
        );
        let (num, den) = super::similarity_ratio(&a, &b);
        let got = normalized_similarity(&a, &b);
        let err = (got - num as f64 / den as f64).abs();
        worst = worst.max(err);
        ensure!(err <= 1e-12, "similarity({a:?}, {b:?}) = {got}, oracle {num}/{den}");
    }
    Ok(format!("{pairs} pairs, max |error| {worst:.1e}"))
}

pub fn tie_break(shuffles: usize, seed: u64) -> Check {
    let date = |y| NaiveDate::from_ymd_opt(y, 6, 1);
    let mut r = rng(seed);
    let sets: Vec<(&str, Vec<MatchCandidate>)> = vec![
        (
            "Aisha Retno - Sutera",
            vec![
                MatchCandidate::new(Library::Fixture, "Aisha Retno", "Sutera", date(2010)),
                MatchCandidate::new(Library::Fixture, "Aisha Retno", "Sutera", date(1998)),
                MatchCandidate::new(Library::Fixture, "Aisha Retna", "Sutera", date(1990)),
                MatchCandidate::new(Library::Fixture, "Someone Else", "Sutera", None),
            ],
        ),
        (
            // Imperfect but equal scores: one substitution each.
            "Anggun - Snow on the Sahara",
            vec![
                MatchCandidate::new(Library::Fixture, "Anggun", "Snow on the Sahera", date(2010)),
                MatchCandidate::new(Library::Fixture, "Anggan", "Snow on the Sahara", date(1998)),
                MatchCandidate::new(Library::Fixture, "Anggun", "La neige au Sahara", date(1997)),
            ],
        ),
    ];
    for (description, mut candidates) in sets {
        let expected = select_match(description, &candidates, 0.0);
        let chosen = expected.chosen.clone().ok_or("nothing chosen")?;
        ensure!(
            chosen.release_date == date(1998),
            "{description:?}: chose {:?}",
            chosen.release_date
        );
        for _ in 0..shuffles {
            candidates.shuffle(&mut r);
            let got = select_match(description, &candidates, 0.0);
            ensure!(
                got == expected,
                "{description:?}: a permutation changed the result to {:?}",
                got.chosen
            );
        }
    }
    Ok(format!(
        "1998 chosen over 2010 in 2 sets, stable under {shuffles} shuffles each"
    ))
}

pub fn reliable_subset(seeds: std::ops::Range<u64>) -> Check {
    let (mut kept, mut boundary) = (0, 0);
    for seed in seeds {
        let corpus = synthetic_corpus(
            &SynthParams {
                events: 2000,
                ..Default::default()
            },
            seed,
        );
        let sub = corpus.reliable_subset(0.90);
        let got: std::collections::BTreeSet<String> = sub.events().map(|e| e.event_id.0.clone()).collect();
        let want = super::reliable_ids(&corpus, 0.90);
        ensure!(
            got == want,
            "seed {seed}: subset has {} events, oracle {}",
            got.len(),
            want.len()
        );
        for e in sub.events() {
            let row = sub
                .join(e)
                .ok_or_else(|| format!("{} lost a referenced record", e.event_id.0))?;
            ensure!(
                row == super::join(&corpus, corpus.event(&e.event_id).unwrap()),
                "{} differs",
                e.event_id.0
            );
        }
        kept += want.len();
        boundary += corpus.events().filter(|e| e.reliability == Some(0.9)).count();
    }
    Ok(format!("{kept} events kept, {boundary} of them exactly 0.90"))
}

pub fn query_oracle(corpora: usize, events: usize, filters_per_corpus: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    let limit = 1000;
    let (mut queries, mut capped, mut returned) = (0, 0, 0);
    for c in 0..corpora {
        let corpus = synthetic_corpus(
            &SynthParams {
                events,
                ..Default::default()
            },
            seed * 1000 + c as u64,
        );
        let mut filters = vec![EventFilter::default()];
        filters.extend((0..filters_per_corpus).map(|_| super::random_filter(&mut r, &corpus)));
        for f in &filters {
            let got = corpus.query_events(f, limit);
            let want = super::query(&corpus, f, limit);
            ensure!(got.len() <= limit, "cap exceeded: {}", got.len());
            if got != want {
                let ids = |rows: &[EventRow]| {
                    rows.iter()
                        .take(5)
                        .map(|r| r.event.event_id.0.clone())
                        .collect::<Vec<_>>()
                };
                return Err(format!(
                    "corpus {c}, filter {f:?}: {} rows vs oracle {} (first {:?} vs {:?})",
                    got.len(),
                    want.len(),
                    ids(&got),
                    ids(&want)
                ));
            }
            queries += 1;
            capped += usize::from(got.len() == limit);
            returned += got.len();
        }
    }
    Ok(format!(
        "{corpora} corpora x {events} events, {queries} queries returning {returned} rows, {capped} hit the {limit} cap"
    ))
}

fn random_points(r: &mut ChaCha8Rng, n: usize) -> Vec<StationPoint> {
    let codes = country_codes();
    (0..n)
        .map(|i| StationPoint {
            station_id: format!("p{i}").into(),
            coordinates: Coordinates::new(r.random_range(-180.0..=180.0), r.random_range(-90.0..=90.0)),
            country_code: codes.choose(r).unwrap().to_string(),
        })
        .collect()
}

/// Rows with coordinates scattered around their city, so groups and merges
/// are not trivial.
fn jittered_rows(r: &mut ChaCha8Rng, corpus: &Corpus, n: usize) -> Vec<EventRow> {
    let mut rows = corpus.query_events(&EventFilter::default(), n);
    for row in &mut rows {
        if r.random_bool(0.5) {
            let c = &mut row.location.coordinates;
            c.longitude += r.random_range(-3i32..=3) as f64 * 0.7;
            c.latitude += r.random_range(-3i32..=3) as f64 * 0.7;
        }
    }
    rows
}

pub fn aggregations(rounds: u64, seed: u64) -> Check {
    let mut r = rng(seed);
    let (mut bins_checked, mut dots_checked, mut bars_checked, mut hists_checked) = (0, 0, 0, 0);
    let resolutions = [0.1, 0.5, 1.0, 2.5, 5.0, 10.0, 30.0, 90.0];
    for round in 0..rounds {
        let corpus = synthetic_corpus(
            &SynthParams {
                events: 1500,
                ..Default::default()
            },
            seed + round,
        );
        let pts: Vec<StationPoint> = if round % 2 == 0 {
            station_points(&corpus)
        } else {
            random_points(&mut r, 400)
        };
        let oracle_pts: Vec<(f64, f64, String)> = pts
            .iter()
            .map(|p| (p.coordinates.longitude, p.coordinates.latitude, p.country_code.clone()))
            .collect();
        for &res in &resolutions {
            let bins = hexbin_aggregate(&pts, res).map_err(|e| e.to_string())?;
            let want = super::hex_bins(&oracle_pts, res);
            let got: BTreeMap<(i64, i64), (usize, BTreeMap<String, usize>)> = bins
                .iter()
                .map(|b| ((b.q, b.r), (b.station_count, b.country_breakdown.clone())))
                .collect();
            ensure!(got.len() == bins.len(), "duplicate hex cells at resolution {res}");
            ensure!(got == want, "hexbin mismatch at resolution {res}");
            let total: usize = bins.iter().map(|b| b.station_count).sum();
            ensure!(
                total == pts.len(),
                "hexbin total {total} != {} stations at resolution {res}",
                pts.len()
            );
            for b in &bins {
                let (x, y) = super::hex_center(b.q, b.r, res);
                ensure!(
                    (b.center.longitude - x).abs() < 1e-9 && (b.center.latitude - y).abs() < 1e-9,
                    "center of ({}, {}) at {res}",
                    b.q,
                    b.r
                );
            }
            bins_checked += bins.len();
        }

        let rows = jittered_rows(&mut r, &corpus, 600);
        for radius in [0.0, 0.5, 1.0, 2.0, 10.0, 200.0] {
            let selected: Vec<EventId> = rows
                .choose_multiple(&mut r, 3)
                .map(|x| x.event.event_id.clone())
                .collect();
            let sel: Vec<String> = selected.iter().map(|e| e.0.clone()).collect();
            let got = map_dots(&rows, radius, &selected).map_err(|e| e.to_string())?;
            let want = super::dots(&rows, radius, &sel);
            ensure!(
                got.len() == want.len(),
                "radius {radius}: {} dots vs oracle {}",
                got.len(),
                want.len()
            );
            for (g, w) in got.iter().zip(&want) {
                ensure!(
                    g.event_count == w.2
                        && g.contains_selected == w.3
                        && (g.position.longitude - w.0).abs() < 1e-9
                        && (g.position.latitude - w.1).abs() < 1e-9,
                    "radius {radius}: dot {g:?} vs oracle {w:?}"
                );
            }
            let flagged = got.iter().filter(|d| d.contains_selected).count();
            ensure!(flagged >= 1, "radius {radius}: no dot flagged");
            dots_checked += got.len();
        }

        let rows = corpus.query_events(&super::random_filter(&mut r, &corpus), 1000);
        for field in super::BAR_FIELDS {
            for k in [1, 3, 10, 10_000] {
                let got: Vec<(String, usize)> = bar_counts_by_name(&rows, field, k)
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .map(|b| (b.label, b.count))
                    .collect();
                ensure!(got == super::bars(&rows, field, k), "bars by {field}, k={k}");
                bars_checked += 1;
            }
        }

        let all = corpus.query_events(&EventFilter::default(), usize::MAX);
        for field in NumericField::ALL {
            let values = numeric_values(&all, field);
            if values.is_empty() {
                continue;
            }
            for k in [1, 2, 7, 10, 64] {
                let got: Vec<(f64, f64, usize)> = histogram(&values, k)
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .map(|b| (b.start, b.end, b.count))
                    .collect();
                ensure!(
                    got == super::hist(&values, k),
                    "histogram of {}, {k} bins",
                    field.name()
                );
                ensure!(
                    got.iter().map(|b| b.2).sum::<usize>() == values.len(),
                    "histogram of {} loses values",
                    field.name()
                );
                hists_checked += 1;
            }
        }
    }
    let constant = histogram(&[0.5; 9], 4).map_err(|e| e.to_string())?;
    ensure!(
        constant.len() == 1 && constant[0].count == 9,
        "constant input: {constant:?}"
    );
    Ok(format!(
        "{bins_checked} hex bins, {dots_checked} map dots, {bars_checked} bar charts, {hists_checked} histograms"
    ))
}

fn compare_pca(model: &PcaModel, rows: &[[f64; 5]], what: &str) -> Result<f64, String> {
    let o = super::pca(rows);
    let mut worst = 0.0f64;
    for k in 0..2 {
        for j in 0..5 {
            worst = worst.max((model.components[k][j] - o.components[k][j]).abs());
        }
        ensure!(
            (model.explained_variance[k] - o.variances[k].max(0.0)).abs() <= 1e-9,
            "{what}: variance {k} {} vs oracle {}",
            model.explained_variance[k],
            o.variances[k]
        );
    }
    ensure!(worst <= 1e-6, "{what}: components differ from the oracle by {worst:e}");
    let dot = |a: &[f64; 5], b: &[f64; 5]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let c = &model.components;
    for (a, b, want) in [(0, 0, 1.0), (1, 1, 1.0), (0, 1, 0.0)] {
        let d = dot(&c[a], &c[b]);
        ensure!((d - want).abs() <= 1e-9, "{what}: <c{a}, c{b}> = {d}");
    }
    ensure!(
        model.explained_variance[0] >= model.explained_variance[1],
        "{what}: variances not descending"
    );
    Ok(worst)
}

pub fn pca(datasets: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for i in 0..datasets {
        let n = r.random_range(3..300);
        let rows: Vec<[f64; 5]> = if i % 2 == 0 {
            (0..n)
                .map(|_| std::array::from_fn(|_| r.random_range(0.0..1.0)))
                .collect()
        } else {
            // Two latent factors plus noise: a clear spectral gap.
            let load: [[f64; 5]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| r.random_range(-1.0..1.0)));
            (0..n)
                .map(|_| {
                    let (a, b) = (r.random_range(-2.0..2.0), r.random_range(-1.0..1.0));
                    std::array::from_fn(|j| a * load[0][j] + b * load[1][j] + r.random_range(-0.05..0.05))
                })
                .collect()
        };
        let model = pca_fit(&rows).map_err(|e| e.to_string())?;
        worst = worst.max(compare_pca(&model, &rows, &format!("dataset {i}"))?);
        let doubled: Vec<[f64; 5]> = rows.iter().chain(&rows).copied().collect();
        let again = pca_fit(&doubled).map_err(|e| e.to_string())?;
        for k in 0..2 {
            for j in 0..5 {
                ensure!(
                    (again.components[k][j] - model.components[k][j]).abs() <= 1e-6,
                    "dataset {i}: duplicating rows moved component {k}"
                );
            }
        }
    }

    let corpus = synthetic_corpus(&SynthParams::default(), seed);
    let rows = corpus.query_events(&EventFilter::default(), usize::MAX);
    let view = pca_view(&rows).map_err(|e| e.to_string())?;
    let mut vectors: BTreeMap<&TrackId, [f64; 5]> = BTreeMap::new();
    for row in &rows {
        if let Some(t) = &row.track {
            if let Some(f) = &t.features {
                vectors.insert(
                    &t.track_id,
                    [
                        f.danceability,
                        f.speechiness,
                        f.acousticness,
                        f.liveness,
                        f.instrumentalness,
                    ],
                );
            }
        }
    }
    let distinct: Vec<[f64; 5]> = vectors.values().copied().collect();
    ensure!(
        view.points.len() == distinct.len(),
        "pca view has {} points for {} tracks",
        view.points.len(),
        distinct.len()
    );
    worst = worst.max(compare_pca(&view.model, &distinct, "corpus tracks")?);

    let axis = [0.6, -0.0, 0.0, 0.8, 0.0];
    let line: Vec<[f64; 5]> = (0..50)
        .map(|_| {
            let t = r.random_range(-1.0..1.0);
            std::array::from_fn(|j| 0.3 + t * axis[j])
        })
        .collect();
    let single = pca_fit(&line).map_err(|e| e.to_string())?;
    ensure!(
        single.explained_variance[1].abs() <= 1e-12,
        "single axis: second eigenvalue {:e}",
        single.explained_variance[1]
    );
    let along: f64 = single.components[0].iter().zip(axis).map(|(a, b)| a * b).sum();
    ensure!(
        (along.abs() - 1.0).abs() <= 1e-9,
        "single axis: first component off the axis ({along})"
    );
    Ok(format!(
        "{datasets} datasets and {} corpus tracks, max component error {worst:.1e}, single-axis second eigenvalue {:.1e}",
        distinct.len(),
        single.explained_variance[1]
    ))
}

const AWKWARD: [&str; 8] = [
    ", ",
    "\"",
    "\"\"",
    "Zürich",
    "São Paulo",
    "Beyoncé",
    "a,\"b\"\nc",
    "Ñandú \u{2013} Çà",
];

pub fn csv_round_trip(seed: u64) -> Check {
    let mut r = rng(seed);
    let corpus = synthetic_corpus(
        &SynthParams {
            events: 800,
            ..Default::default()
        },
        seed,
    );
    let mut rows = corpus.query_events(&EventFilter::default(), usize::MAX);
    for row in &mut rows {
        let mut garnish = |s: &mut String| {
            if r.random_bool(0.4) {
                s.insert_str(0, AWKWARD.choose(&mut r).unwrap());
            }
        };
        garnish(&mut row.event.description);
        garnish(&mut row.station.name);
        if let Some(a) = &mut row.artist {
            garnish(&mut a.name);
        }
        if let Some(a) = &mut row.artist {
            a.genres
                .push(AWKWARD[row.event.event_id.0.len() % AWKWARD.len()].to_string());
        }
        if let Some(t) = &mut row.track {
            garnish(&mut t.title);
        }
    }
    let bytes = export_csv(&rows, ColumnSet::Full);
    let back = import_csv(&bytes).map_err(|e| e.to_string())?;
    ensure!(back.len() == rows.len(), "{} rows back from {}", back.len(), rows.len());
    for (a, b) in rows.iter().zip(&back) {
        ensure!(a == b, "row {} changed in the round trip", a.event.event_id.0);
    }
    ensure!(export_csv(&back, ColumnSet::Full) == bytes, "re-export differs");
    Ok(format!("{} rows, {} bytes", rows.len(), bytes.len()))
}

pub fn corpus_files_round_trip(seed: u64) -> Check {
    let corpus = synthetic_corpus(
        &SynthParams {
            events: 1500,
            ..Default::default()
        },
        seed,
    );
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    export_corpus(&corpus, &a).map_err(|e| e.to_string())?;
    let back = import_corpus(&a).map_err(|e| e.to_string())?;
    ensure!(back == corpus, "imported corpus differs");
    export_corpus(&back, &b).map_err(|e| e.to_string())?;
    let files = corpus_files(&corpus);
    for (name, _) in &files {
        let (x, y) = (std::fs::read(a.join(name)), std::fs::read(b.join(name)));
        ensure!(
            x.is_ok() && x.as_ref().ok() == y.as_ref().ok(),
            "{name} differs after re-export"
        );
    }
    Ok(format!("{} files bit-identical", files.len()))
}

pub fn share_round_trip(states: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    let corpus = synthetic_corpus(
        &SynthParams {
            events: 300,
            ..Default::default()
        },
        seed,
    );
    let ids: Vec<EventId> = corpus.events().map(|e| e.event_id.clone()).collect();
    for i in 0..states {
        let state = ShareState {
            filter: super::random_filter(&mut r, &corpus),
            selected_event_ids: {
                let k = r.random_range(0..4);
                ids.choose_multiple(&mut r, k).cloned().collect()
            },
            panel_layout: super::random_text(&mut r, 30),
            language: ["en", "id", "pt-BR", "de"].choose(&mut r).unwrap().to_string(),
        };
        let url = encode_share_url(&state);
        let back = decode_share_url(&format!("https://example.org/?{url}")).map_err(|e| format!("state {i}: {e}"))?;
        ensure!(back == state, "state {i} changed: {state:?}");
        ensure!(
            back.filter
                .date_range
                .map(|d| (d.start.offset().local_minus_utc(), d.end.offset().local_minus_utc()))
                == state
                    .filter
                    .date_range
                    .map(|d| (d.start.offset().local_minus_utc(), d.end.offset().local_minus_utc())),
            "state {i}: offsets changed"
        );
    }
    Ok(format!("{states} states"))
}

fn icy_title(r: &mut ChaCha8Rng, budget: usize) -> String {
    let mut s = String::new();
    while s.len() < budget {
        let c = if r.random_bool(0.05) {
            *['\'', ';', ' '].choose(r).unwrap()
        } else {
            super::random_text(r, 1).chars().next().unwrap_or('a')
        };
        if s.len() + c.len_utf8() > budget {
            break;
        }
        s.push(c);
    }
    s
}

pub fn icy_round_trip(titles: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    ensure!(MAX_TITLE_BYTES == 4064, "title limit is {MAX_TITLE_BYTES}");
    let mut longest = 0;
    for i in 0..titles {
        let budget = match i % 4 {
            0 => MAX_TITLE_BYTES,
            1 => r.random_range(0..64),
            _ => r.random_range(0..=MAX_TITLE_BYTES),
        };
        let t = icy_title(&mut r, budget);
        let block = encode_icy_metadata_block(Some(&t)).map_err(|e| format!("{} bytes: {e}", t.len()))?;
        ensure!(block.len() == 1 + 16 * block[0] as usize, "block length");
        let back = parse_icy_metadata_block(&block).map_err(|e| e.to_string())?;
        ensure!(
            back == IcyPayload::Title(t.clone()),
            "title of {} bytes came back as {back:?}",
            t.len()
        );
        longest = longest.max(t.len());
    }
    let exact = "é".repeat(MAX_TITLE_BYTES / 2);
    let back = parse_icy_metadata_block(&encode_icy_metadata_block(Some(&exact)).unwrap()).unwrap();
    ensure!(back == IcyPayload::Title(exact), "4064-byte title");
    ensure!(
        encode_icy_metadata_block(Some(&"a".repeat(MAX_TITLE_BYTES + 1))).is_err(),
        "4065 bytes accepted"
    );
    ensure!(
        parse_icy_metadata_block(&encode_icy_metadata_block(None).unwrap()) == Ok(IcyPayload::Empty),
        "empty block"
    );
    Ok(format!("{titles} titles up to {longest} bytes"))
}

/// (stations, distinct countries) per continent, counted straight from records.
pub fn continent_oracle(corpus: &Corpus) -> (BTreeMap<Continent, (usize, usize)>, usize, usize) {
    let mut per: BTreeMap<Continent, (usize, std::collections::BTreeSet<String>)> = BTreeMap::new();
    let mut all = std::collections::BTreeSet::new();
    let mut total = 0;
    for s in corpus.stations() {
        let l = corpus.location(&s.location_id).unwrap();
        let e = per.entry(l.continent).or_default();
        e.0 += 1;
        e.1.insert(l.country_code.clone());
        all.insert(l.country_code.clone());
        total += 1;
    }
    (
        per.into_iter().map(|(c, (n, cs))| (c, (n, cs.len()))).collect(),
        total,
        all.len(),
    )
}

fn table_matches(corpus: &Corpus) -> Result<(), String> {
    let t = continent_table(corpus);
    let (per, total, countries) = continent_oracle(corpus);
    ensure!(
        t.total_stations == total && t.countries == countries,
        "totals {} / {}",
        t.total_stations,
        t.countries
    );
    for row in &t.rows {
        let want = per.get(&row.continent).copied().unwrap_or((0, 0));
        ensure!(
            (row.stations, row.countries) == want,
            "{:?}: {:?} vs oracle {want:?}",
            row.continent,
            (row.stations, row.countries)
        );
    }
    Ok(())
}

/// (continent, stations, countries) as published.
pub const PUBLISHED: [(Continent, usize, usize); 6] = [
    (Continent::Africa, 392, 39),
    (Continent::Asia, 653, 38),
    (Continent::Europe, 5161, 49),
    (Continent::NorthAmerica, 2243, 33),
    (Continent::Oceania, 222, 5),
    (Continent::SouthAmerica, 1329, 13),
];

/// A 10,000-station directory with the published per-continent station and
/// country counts, stations spread over countries at random.
pub fn published_shape_corpus(seed: u64) -> Corpus {
    let mut r = rng(seed);
    let (mut locations, mut records): (Vec<Record>, Vec<Record>) = (Vec::new(), Vec::new());
    let mut n = 0;
    for (continent, stations, countries) in PUBLISHED {
        let mut codes: Vec<&str> = country_codes()
            .into_iter()
            .filter(|c| continent_for(c) == Some(continent))
            .collect();
        codes.shuffle(&mut r);
        codes.truncate(countries);
        for i in 0..stations {
            // The first pass gives every chosen country at least one station.
            let code = if i < countries {
                codes[i]
            } else {
                codes[r.random_range(0..countries)]
            };
            let loc = LocationRecord {
                location_id: format!("loc-{n:05}").into(),
                city: format!("City {n}"),
                country: format!("Country {code}"),
                country_code: code.into(),
                continent,
                coordinates: Coordinates::new(r.random_range(-180.0..180.0), r.random_range(-60.0..70.0)),
                population: None,
                country_gdp: None,
                utc_offset_min: None,
            };
            records.push(
                StationRecord {
                    station_id: format!("st-{n:05}").into(),
                    name: format!("Radio {n}"),
                    location_id: loc.location_id.clone(),
                    form: StationForm::webcast(),
                    formats: vec![],
                    genres: vec![],
                    website: None,
                    review_status: ReviewStatus::Unreviewed,
                    reliability_pct: None,
                }
                .into(),
            );
            locations.push(loc.into());
            n += 1;
        }
    }
    locations.extend(records);
    let mut corpus = Corpus::new();
    corpus.upsert_batch(locations).expect("valid directory");
    corpus
}

pub fn published_table_matches(corpus: &Corpus) -> Check {
    let t = continent_table(corpus);
    for (c, stations, countries) in PUBLISHED {
        let row = t
            .rows
            .iter()
            .find(|r| r.continent == c)
            .ok_or(format!("{c:?} missing"))?;
        ensure!(
            (row.stations, row.countries) == (stations, countries),
            "{c:?}: {} stations in {} countries, published {stations} in {countries}",
            row.stations,
            row.countries
        );
    }
    ensure!(
        t.total_stations == 10_000 && t.countries == 177,
        "totals {} stations, {} states",
        t.total_stations,
        t.countries
    );
    Ok("392/653/5161/2243/222/1329, 10000 stations, 177 states".into())
}

pub fn continent_stats(seeds: std::ops::Range<u64>) -> Check {
    let mut corpora = 0;
    for seed in seeds.clone() {
        table_matches(&synthetic_corpus(
            &SynthParams {
                stations: 200,
                events: 10,
                ..Default::default()
            },
            seed,
        ))?;
        let fleet = radiometa_core::sim::generate_fleet(
            300,
            chrono::DateTime::UNIX_EPOCH,
            &radiometa_core::sim::ScriptParams {
                entries: 2,
                ..Default::default()
            },
            seed,
        );
        let mut c = Corpus::new();
        c.upsert_batch(
            fleet
                .locations
                .into_iter()
                .map(Record::from)
                .chain(fleet.stations.into_iter().map(Record::from))
                .collect(),
        )
        .map_err(|e| e.to_string())?;
        table_matches(&c)?;
        corpora += 2;
    }
    let shaped = published_shape_corpus(seeds.start);
    table_matches(&shaped)?;
    published_table_matches(&shaped)?;
    Ok(format!(
        "{corpora} random corpora and a 10000-station synthetic directory match the group-by oracle"
    ))
}

/// Hex assignment by nearest center agrees with the cube-rounding formula on
/// random points, including points close to cell edges.
pub fn hex_assignment(points: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    for _ in 0..points {
        let size = *[0.1, 1.0, 7.5, 30.0].choose(&mut r).unwrap();
        let (lon, lat) = (r.random_range(-180.0..180.0), r.random_range(-90.0..90.0));
        let got = hex_cell_for(Coordinates::new(lon, lat), size);
        let want = super::hex_cell(lon, lat, size);
        if (got.q, got.r) != want {
            // Only a tie between two centers may disagree.
            let d = |(q, rr): (i64, i64)| {
                let (x, y) = super::hex_center(q, rr, size);
                ((x - lon).powi(2) + (y - lat).powi(2)).sqrt()
            };
            ensure!(
                (d((got.q, got.r)) - d(want)).abs() <= 1e-9 * size,
                "({lon}, {lat}) at {size}: {got:?} vs {want:?}"
            );
        }
    }
    Ok(format!("{points} points"))
}
