use std::io;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use radiometa_core::matcher::{ClientError, LibraryClient};
use serde::Deserialize;

use crate::server::{spawn, ServerHandle};

#[derive(Debug, Deserialize)]
struct SearchParams {
    q: String,
}

async fn search(State(client): State<Arc<dyn LibraryClient>>, Query(p): Query<SearchParams>) -> Response {
    let result = tokio::task::spawn_blocking(move || client.search(&p.q)).await;
    match result {
        Ok(Ok(hits)) => Json(hits).into_response(),
        Ok(Err(ClientError::Timeout)) => StatusCode::GATEWAY_TIMEOUT.into_response(),
        Ok(Err(e)) => (StatusCode::SERVICE_UNAVAILABLE, e.to_string()).into_response(),
        Err(e) => (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}

/// `GET /search?q=` over any library client, typically a fixture catalog.
pub fn library_router(client: Arc<dyn LibraryClient>) -> Router {
    Router::new().route("/search", get(search)).with_state(client)
}

pub fn serve_library(client: Arc<dyn LibraryClient>, addr: SocketAddr) -> io::Result<ServerHandle> {
    spawn(library_router(client), addr)
}
