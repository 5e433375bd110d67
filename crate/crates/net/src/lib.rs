//! HTTP surfaces: the station simulator, the `/v1` query API, a library
//! search server, and blocking clients for the first and last.

mod api;
mod client;
mod library;
mod server;
mod simulator;

pub use api::{
    api_router, filter_query, serve_api, ApiError, Page, Params, ShareLink, StationEntry, DEFAULT_LIMIT, FILTER_PARAMS,
    MAX_LIMIT,
};
pub use client::{fetch_directory, FetchError, HttpLibraryClient, HttpSource, DEFAULT_TIMEOUT};
pub use library::{library_router, serve_library};
pub use server::{serve_forever, spawn, ServerHandle};
pub use simulator::{serve_fleet, simulator_router, FleetDirectory};
