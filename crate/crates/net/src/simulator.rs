//! HTTP face of a simulated fleet: `GET /stations/{id}/now` answers with one
//! ICY metadata block for the station's current script entry.

use std::collections::BTreeMap;
use std::io;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use chrono::{DateTime, Utc};
use radiometa_core::clock::Clock;
use radiometa_core::domain::{LocationRecord, StationId, StationRecord};
use radiometa_core::monitor::encode_icy_metadata_block;
use radiometa_core::sim::{script_time, Emission, Fleet, Payload, ScenarioScript};
use serde::{Deserialize, Serialize};

use crate::server::{spawn, ServerHandle};

/// Station directory as served by `GET /stations`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FleetDirectory {
    pub epoch: DateTime<Utc>,
    pub locations: Vec<LocationRecord>,
    pub stations: Vec<StationRecord>,
}

struct SimState {
    directory: FleetDirectory,
    scripts: BTreeMap<StationId, ScenarioScript>,
    clock: Arc<dyn Clock + Sync>,
}

#[derive(Debug, Deserialize)]
struct NowParams {
    /// Unix seconds; overrides the server clock so polls are reproducible.
    at: Option<i64>,
}

fn plain(status: StatusCode, msg: impl Into<String>) -> Response {
    (status, msg.into()).into_response()
}

async fn now(State(st): State<Arc<SimState>>, Path(id): Path<String>, Query(p): Query<NowParams>) -> Response {
    let Some(script) = st.scripts.get(&StationId(id.clone())) else {
        return plain(StatusCode::NOT_FOUND, format!("unknown station {id}"));
    };
    let at = match p.at {
        Some(s) => match DateTime::from_timestamp(s, 0) {
            Some(t) => t,
            None => return plain(StatusCode::BAD_REQUEST, "at out of range"),
        },
        None => st.clock.now(),
    };
    let payload = match script.emission_at(script_time(st.directory.epoch, at)) {
        Emission::Ended => return plain(StatusCode::GONE, "end of script"),
        Emission::Payload(p) => p,
    };
    if *payload == Payload::Offline {
        return plain(StatusCode::SERVICE_UNAVAILABLE, "station offline");
    }
    match encode_icy_metadata_block(payload.text()) {
        Ok(block) => ([(header::CONTENT_TYPE, "application/octet-stream")], block).into_response(),
        Err(e) => plain(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

async fn stations(State(st): State<Arc<SimState>>) -> Json<FleetDirectory> {
    Json(st.directory.clone())
}

async fn script(State(st): State<Arc<SimState>>, Path(id): Path<String>) -> Response {
    match st.scripts.get(&StationId(id.clone())) {
        Some(s) => Json(s.clone()).into_response(),
        None => plain(StatusCode::NOT_FOUND, format!("unknown station {id}")),
    }
}

/// Routes: `GET /stations`, `GET /stations/{id}/now[?at=unix]`,
/// `GET /stations/{id}/script`.
///
/// `/now` answers 404 for unknown stations, 503 while a station is offline
/// and 410 once a non-looping script has ended.
pub fn simulator_router(fleet: &Fleet, clock: Arc<dyn Clock + Sync>) -> Router {
    let state = SimState {
        directory: FleetDirectory {
            epoch: fleet.epoch,
            locations: fleet.locations.clone(),
            stations: fleet.stations.clone(),
        },
        scripts: fleet.script_index(),
        clock,
    };
    Router::new()
        .route("/stations", get(stations))
        .route("/stations/{id}/now", get(now))
        .route("/stations/{id}/script", get(script))
        .with_state(Arc::new(state))
}

pub fn serve_fleet(fleet: &Fleet, clock: Arc<dyn Clock + Sync>, addr: SocketAddr) -> io::Result<ServerHandle> {
    spawn(simulator_router(fleet, clock), addr)
}
