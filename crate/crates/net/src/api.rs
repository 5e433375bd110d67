//! Versioned JSON query API over a [`Store`]. Each request works on one
//! snapshot, so concurrent writes never show up half-applied.

use std::collections::BTreeMap;
use std::io;
use std::net::SocketAddr;
use std::str::FromStr;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::{DateTime, Utc};
use radiometa_core::analysis::{
    bar_counts, continent_table, decode_share_url, encode_share_token, encode_share_url, event_detail, export_csv,
    hexbin_aggregate, histogram, map_dots, numeric_values, pca_view, scatter, station_points, AggError, CategoryField,
    ColumnSet, NumericField, ShareState, StationPoint,
};
use radiometa_core::domain::{EventId, LocationRecord, StationId, StationRecord};
use radiometa_core::matcher::RELIABLE_THRESHOLD;
use radiometa_core::store::{
    Corpus, Cursor, DateRange, EventFilter, EventRow, HexCellRef, StationEdits, Store, StoreError,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::server::{spawn, ServerHandle};

pub const DEFAULT_LIMIT: usize = 1000;
pub const MAX_LIMIT: usize = 10_000;

/// Filter clauses as query parameters. `start`/`end` are RFC 3339 and go
/// together, as do `hex_res`/`hex_q`/`hex_r`.
pub const FILTER_PARAMS: [&str; 12] = [
    "country",
    "city",
    "station_id",
    "q",
    "min_reliability",
    "start",
    "end",
    "genre",
    "artist_country",
    "hex_res",
    "hex_q",
    "hex_r",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
}

impl ApiError {
    fn bad(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            message: message.into(),
        }
    }

    fn unprocessable(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            message: message.into(),
        }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        let status = match e {
            StoreError::NotFound { .. } => StatusCode::NOT_FOUND,
            StoreError::Io { .. } => StatusCode::INTERNAL_SERVER_ERROR,
            StoreError::UndefinedReliability(_) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::BAD_REQUEST,
        };
        Self {
            status,
            message: e.to_string(),
        }
    }
}

impl From<AggError> for ApiError {
    fn from(e: AggError) -> Self {
        match e {
            AggError::EmptyInput => Self::unprocessable(e.to_string()),
            _ => Self::bad(e.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

/// Query parameters; every one must be consumed or the request is rejected.
pub struct Params {
    map: BTreeMap<String, String>,
}

impl Params {
    pub fn new(pairs: Vec<(String, String)>) -> Result<Self, ApiError> {
        let mut map = BTreeMap::new();
        for (k, v) in pairs {
            if map.insert(k.clone(), v).is_some() {
                return Err(ApiError::bad(format!("parameter {k:?} given twice")));
            }
        }
        Ok(Self { map })
    }

    pub fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    pub fn parse<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, ApiError>
    where
        T::Err: std::fmt::Display,
    {
        self.take(key)
            .map(|v| v.parse::<T>().map_err(|e| ApiError::bad(format!("{key}={v:?}: {e}"))))
            .transpose()
    }

    pub fn finish(self) -> Result<(), ApiError> {
        match self.map.keys().next() {
            Some(k) => Err(ApiError::bad(format!("unknown parameter {k:?}"))),
            None => Ok(()),
        }
    }

    /// Filter clauses, or the filter of a share token given as `state=`.
    pub fn filter(&mut self) -> Result<EventFilter, ApiError> {
        if let Some(token) = self.take("state") {
            if let Some(k) = FILTER_PARAMS.iter().find(|k| self.map.contains_key(**k)) {
                return Err(ApiError::bad(format!("{k:?} cannot be combined with state")));
            }
            let state = decode_share_url(&token).map_err(|e| ApiError::bad(e.to_string()))?;
            return Ok(state.filter);
        }
        let time = |p: &mut Self, k: &str| -> Result<Option<DateTime<chrono::FixedOffset>>, ApiError> {
            p.take(k)
                .map(|v| DateTime::parse_from_rfc3339(&v).map_err(|e| ApiError::bad(format!("{k}={v:?}: {e}"))))
                .transpose()
        };
        let date_range = match (time(self, "start")?, time(self, "end")?) {
            (Some(start), Some(end)) => Some(DateRange { start, end }),
            (None, None) => None,
            _ => return Err(ApiError::bad("start and end go together")),
        };
        let hex_cell = match (
            self.parse::<f64>("hex_res")?,
            self.parse("hex_q")?,
            self.parse("hex_r")?,
        ) {
            (Some(resolution), Some(q), Some(r)) => Some(HexCellRef { resolution, q, r }),
            (None, None, None) => None,
            _ => return Err(ApiError::bad("hex_res, hex_q and hex_r go together")),
        };
        let filter = EventFilter {
            country: self.take("country"),
            city: self.take("city"),
            station_id: self.take("station_id").map(StationId),
            text_query: self.take("q"),
            min_reliability: self.parse("min_reliability")?,
            date_range,
            genre: self.take("genre"),
            artist_country: self.take("artist_country"),
            hex_cell,
        };
        filter.validate()?;
        Ok(filter)
    }

    fn limit(&mut self) -> Result<usize, ApiError> {
        let limit = self.parse::<usize>("limit")?.unwrap_or(DEFAULT_LIMIT);
        if !(1..=MAX_LIMIT).contains(&limit) {
            return Err(ApiError::bad(format!("limit must lie in [1, {MAX_LIMIT}]")));
        }
        Ok(limit)
    }
}

/// Inverse of [`Params::filter`]: the query pairs selecting `filter`.
pub fn filter_query(filter: &EventFilter) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            out.push((k.to_string(), v));
        }
    };
    put("country", filter.country.clone());
    put("city", filter.city.clone());
    put("station_id", filter.station_id.as_ref().map(|s| s.0.clone()));
    put("q", filter.text_query.clone());
    put("min_reliability", filter.min_reliability.map(|m| m.to_string()));
    put("start", filter.date_range.as_ref().map(|r| r.start.to_rfc3339()));
    put("end", filter.date_range.as_ref().map(|r| r.end.to_rfc3339()));
    put("genre", filter.genre.clone());
    put("artist_country", filter.artist_country.clone());
    put("hex_res", filter.hex_cell.as_ref().map(|h| h.resolution.to_string()));
    put("hex_q", filter.hex_cell.as_ref().map(|h| h.q.to_string()));
    put("hex_r", filter.hex_cell.as_ref().map(|h| h.r.to_string()));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationEntry {
    pub station: StationRecord,
    pub location: LocationRecord,
    pub event_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Page<T> {
    pub items: Vec<T>,
    pub next_cursor: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShareLink {
    pub token: String,
    /// `state=<token>`, ready to append to a dashboard URL.
    pub query: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReliabilityRequest {
    #[serde(default = "default_threshold")]
    threshold: f64,
}

fn default_threshold() -> f64 {
    RELIABLE_THRESHOLD
}

struct ApiState {
    store: Arc<Store>,
}

type Pairs = Query<Vec<(String, String)>>;
type Outcome = Result<Response, ApiError>;

fn all_rows(corpus: &Corpus, filter: &EventFilter) -> Vec<EventRow> {
    corpus.query_events(filter, usize::MAX)
}

fn list_stations(corpus: &Corpus, mut p: Params) -> Outcome {
    let limit = p.limit()?;
    let after = p.take("cursor");
    p.finish()?;
    let mut items = Vec::new();
    let mut next = None;
    for s in corpus.stations() {
        if after.as_deref().is_some_and(|a| s.station_id.0.as_str() <= a) {
            continue;
        }
        if items.len() == limit {
            next = items.last().map(|e: &StationEntry| e.station.station_id.0.clone());
            break;
        }
        items.push(StationEntry {
            station: s.clone(),
            location: corpus.location(&s.location_id).cloned().expect("integrity"),
            event_count: corpus.station_events(&s.station_id).len(),
        });
    }
    Ok(Json(Page {
        items,
        next_cursor: next,
    })
    .into_response())
}

fn list_events(corpus: &Corpus, mut p: Params) -> Outcome {
    let filter = p.filter()?;
    let limit = p.limit()?;
    let cursor = p.take("cursor").map(|c| Cursor::decode(&c)).transpose()?;
    p.finish()?;
    let (items, next) = corpus.query_page(&filter, limit, cursor.as_ref());
    Ok(Json(Page {
        items,
        next_cursor: next.map(|c| c.encode()),
    })
    .into_response())
}

fn hexbins(corpus: &Corpus, mut p: Params) -> Outcome {
    let res: f64 = p.parse("res")?.ok_or_else(|| ApiError::bad("res is required"))?;
    let filter = p.filter()?;
    p.finish()?;
    let points: Vec<StationPoint> = if filter.is_empty() {
        station_points(corpus)
    } else {
        let mut seen = BTreeMap::new();
        for row in all_rows(corpus, &filter) {
            seen.entry(row.station.station_id.clone()).or_insert(StationPoint {
                station_id: row.station.station_id.clone(),
                coordinates: row.location.coordinates,
                country_code: row.location.country_code.clone(),
            });
        }
        seen.into_values().collect()
    };
    let bins = hexbin_aggregate(&points, res)?;
    Ok(Json(json!({ "resolution": res, "station_count": points.len(), "bins": bins })).into_response())
}

fn dots(corpus: &Corpus, mut p: Params) -> Outcome {
    let radius: f64 = p.parse("radius")?.unwrap_or(0.0);
    let selected: Vec<EventId> = p
        .take("selected")
        .map(|s| {
            s.split(',')
                .filter(|x| !x.is_empty())
                .map(|x| EventId(x.to_string()))
                .collect()
        })
        .unwrap_or_default();
    let filter = p.filter()?;
    p.finish()?;
    let dots = map_dots(&all_rows(corpus, &filter), radius, &selected)?;
    Ok(Json(json!({ "radius": radius, "dots": dots })).into_response())
}

fn field<T: FromStr>(p: &mut Params, key: &str) -> Result<T, ApiError>
where
    T::Err: std::fmt::Display,
{
    p.take(key)
        .ok_or_else(|| ApiError::bad(format!("{key} is required")))?
        .parse()
        .map_err(|e: T::Err| ApiError::bad(e.to_string()))
}

fn bars(corpus: &Corpus, mut p: Params) -> Outcome {
    let by: CategoryField = field(&mut p, "by")?;
    let k: usize = p.parse("k")?.unwrap_or(10);
    let filter = p.filter()?;
    p.finish()?;
    let bars = bar_counts(&all_rows(corpus, &filter), by, k);
    Ok(Json(json!({ "by": by.name(), "bars": bars })).into_response())
}

fn hist(corpus: &Corpus, mut p: Params) -> Outcome {
    let f: NumericField = field(&mut p, "field")?;
    let bins: usize = p.parse("bins")?.unwrap_or(10);
    let filter = p.filter()?;
    p.finish()?;
    let values = numeric_values(&all_rows(corpus, &filter), f);
    let bins = histogram(&values, bins)?;
    Ok(Json(json!({ "field": f.name(), "count": values.len(), "bins": bins })).into_response())
}

fn scatter_points(corpus: &Corpus, mut p: Params) -> Outcome {
    let x: NumericField = field(&mut p, "x")?;
    let y: NumericField = field(&mut p, "y")?;
    let filter = p.filter()?;
    p.finish()?;
    let points = scatter(&all_rows(corpus, &filter), x, y);
    Ok(Json(json!({ "x": x.name(), "y": y.name(), "points": points })).into_response())
}

fn pca(corpus: &Corpus, mut p: Params) -> Outcome {
    let filter = p.filter()?;
    p.finish()?;
    let view = pca_view(&all_rows(corpus, &filter)).map_err(|e| ApiError::unprocessable(e.to_string()))?;
    Ok(Json(view).into_response())
}

fn continents(corpus: &Corpus, p: Params) -> Outcome {
    p.finish()?;
    Ok(Json(continent_table(corpus)).into_response())
}

fn csv(corpus: &Corpus, mut p: Params) -> Outcome {
    let scope = p.take("scope").unwrap_or_else(|| "full".into());
    let threshold: f64 = p.parse("threshold")?.unwrap_or(RELIABLE_THRESHOLD);
    let filter = p.filter()?;
    p.finish()?;
    let (rows, set) = match scope.as_str() {
        "full" => (all_rows(corpus, &filter), ColumnSet::Full),
        "reliable" => (all_rows(&corpus.reliable_subset(threshold), &filter), ColumnSet::Full),
        "public-domain" | "public_domain" => (all_rows(corpus, &filter), ColumnSet::PublicDomain),
        other => return Err(ApiError::bad(format!("unknown scope {other:?}"))),
    };
    let body = export_csv(&rows, set);
    Ok((
        [
            (header::CONTENT_TYPE, "text/csv; charset=utf-8".to_string()),
            (
                header::CONTENT_DISPOSITION,
                format!("attachment; filename=\"events-{scope}.csv\""),
            ),
        ],
        body,
    )
        .into_response())
}

fn share_get(_: &Corpus, mut p: Params) -> Outcome {
    let token = p.take("state").ok_or_else(|| ApiError::bad("state is required"))?;
    p.finish()?;
    let state = decode_share_url(&token).map_err(|e| ApiError::bad(e.to_string()))?;
    Ok(Json(state).into_response())
}

/// Runs a read handler on a blocking thread against the current snapshot.
async fn read(state: Arc<ApiState>, pairs: Vec<(String, String)>, h: fn(&Corpus, Params) -> Outcome) -> Response {
    let run = move || -> Outcome { h(&state.store.snapshot(), Params::new(pairs)?) };
    match tokio::task::spawn_blocking(run).await {
        Ok(Ok(r)) => r,
        Ok(Err(e)) => e.into_response(),
        Err(e) => ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            message: e.to_string(),
        }
        .into_response(),
    }
}

macro_rules! reader {
    ($h:expr) => {
        get(|State(s): State<Arc<ApiState>>, Query(q): Pairs| read(s, q, $h))
    };
}

async fn event(State(s): State<Arc<ApiState>>, Path(id): Path<String>, Query(q): Pairs) -> Response {
    let run = move || -> Outcome {
        Params::new(q)?.finish()?;
        Ok(Json(event_detail(&s.store.snapshot(), &EventId(id))?).into_response())
    };
    tokio::task::spawn_blocking(run)
        .await
        .unwrap_or_else(|e| Err(ApiError::bad(e.to_string())))
        .into_response()
}

async fn share_post(Json(state): Json<ShareState>) -> Outcome {
    state.filter.validate()?;
    Ok(Json(ShareLink {
        token: encode_share_token(&state),
        query: encode_share_url(&state),
    })
    .into_response())
}

async fn review(State(s): State<Arc<ApiState>>, Path(id): Path<String>, Json(edits): Json<StationEdits>) -> Outcome {
    let run = move || s.store.review_station(&StationId(id), &edits, Utc::now());
    let station = tokio::task::spawn_blocking(run)
        .await
        .map_err(|e| ApiError::bad(e.to_string()))??;
    Ok(Json(station).into_response())
}

async fn reliability(
    State(s): State<Arc<ApiState>>,
    Path(id): Path<String>,
    Json(req): Json<ReliabilityRequest>,
) -> Outcome {
    if !(0.0..=1.0).contains(&req.threshold) {
        return Err(ApiError::bad("threshold must lie in [0, 1]"));
    }
    let run = move || {
        s.store
            .compute_station_reliability(&StationId(id), req.threshold, Utc::now())
    };
    let pct = tokio::task::spawn_blocking(run)
        .await
        .map_err(|e| ApiError::bad(e.to_string()))??;
    Ok(Json(json!({ "reliability_pct": pct })).into_response())
}

/// The `/v1` routes.
///
/// Reads: `stations`, `events`, `events/{id}`, `agg/{hexbin,map,bar,hist,
/// scatter,pca}`, `stats/continents`, `export/csv`, `share`. Writes:
/// `POST share`, `POST stations/{id}/review`, `POST stations/{id}/reliability`.
pub fn api_router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/v1/stations", reader!(list_stations))
        .route("/v1/stations/{id}/review", post(review))
        .route("/v1/stations/{id}/reliability", post(reliability))
        .route("/v1/events", reader!(list_events))
        .route("/v1/events/{id}", get(event))
        .route("/v1/agg/hexbin", reader!(hexbins))
        .route("/v1/agg/map", reader!(dots))
        .route("/v1/agg/bar", reader!(bars))
        .route("/v1/agg/hist", reader!(hist))
        .route("/v1/agg/scatter", reader!(scatter_points))
        .route("/v1/agg/pca", reader!(pca))
        .route("/v1/stats/continents", reader!(continents))
        .route("/v1/export/csv", reader!(csv))
        .route("/v1/share", reader!(share_get).post(share_post))
        .with_state(Arc::new(ApiState { store }))
}

pub fn serve_api(store: Arc<Store>, addr: SocketAddr) -> io::Result<ServerHandle> {
    spawn(api_router(store), addr)
}
