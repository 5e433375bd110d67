//! Blocking HTTP clients: the station poller used by the monitor and the
//! music-library search client used by enrichment.

use std::time::Duration;

use chrono::{DateTime, Utc};
use radiometa_core::domain::StationId;
use radiometa_core::matcher::{ClientError, LibraryClient, MatchCandidate};
use radiometa_core::monitor::{parse_icy_metadata_block, MetadataSource, Poll, SourceError, StreamMetadata};
use thiserror::Error;
use ureq::Agent;

use crate::simulator::FleetDirectory;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

fn agent(timeout: Duration) -> Agent {
    Agent::config_builder()
        .timeout_global(Some(timeout))
        .http_status_as_error(false)
        .build()
        .into()
}

/// Percent-encodes one path segment.
fn segment(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for b in s.bytes() {
        if b.is_ascii_alphanumeric() || b"-._~".contains(&b) {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{b:02X}"));
        }
    }
    out
}

fn trim(base: &str) -> String {
    base.trim_end_matches('/').to_string()
}

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("request to {url} failed: {message}")]
    Transport { url: String, message: String },
    #[error("{url} answered HTTP {status}")]
    Status { url: String, status: u16 },
    #[error("{url}: undecodable body: {message}")]
    Decode { url: String, message: String },
}

fn get_json<T: serde::de::DeserializeOwned>(agent: &Agent, url: &str) -> Result<T, FetchError> {
    let transport = |e: ureq::Error| FetchError::Transport {
        url: url.to_string(),
        message: e.to_string(),
    };
    let mut resp = agent.get(url).call().map_err(transport)?;
    let status = resp.status().as_u16();
    if status != 200 {
        return Err(FetchError::Status {
            url: url.to_string(),
            status,
        });
    }
    let body = resp.body_mut().read_to_vec().map_err(transport)?;
    serde_json::from_slice(&body).map_err(|e| FetchError::Decode {
        url: url.to_string(),
        message: e.to_string(),
    })
}

/// Station directory of a running simulator.
pub fn fetch_directory(base: &str) -> Result<FleetDirectory, FetchError> {
    get_json(&agent(DEFAULT_TIMEOUT), &format!("{}/stations", trim(base)))
}

/// Polls `GET {base}/stations/{id}/now`.
///
/// By default the poll instant is sent as `?at=` so the answer depends only on
/// the script and the monitor's clock. With [`HttpSource::server_time`] the
/// simulator's own clock decides instead.
#[derive(Debug, Clone)]
pub struct HttpSource {
    agent: Agent,
    base: String,
    send_time: bool,
}

impl HttpSource {
    pub fn new(base: &str) -> Self {
        Self::with_timeout(base, DEFAULT_TIMEOUT)
    }

    pub fn with_timeout(base: &str, timeout: Duration) -> Self {
        Self {
            agent: agent(timeout),
            base: trim(base),
            send_time: true,
        }
    }

    pub fn server_time(mut self) -> Self {
        self.send_time = false;
        self
    }
}

impl MetadataSource for HttpSource {
    fn poll(&mut self, station: &StationId, at: DateTime<Utc>) -> Result<Poll, SourceError> {
        let url = format!("{}/stations/{}/now", self.base, segment(&station.0));
        let connection = |message: String| SourceError::Connection {
            station: station.clone(),
            message,
        };
        let mut req = self.agent.get(&url);
        if self.send_time {
            req = req.query("at", at.timestamp().to_string());
        }
        let mut resp = req.call().map_err(|e| connection(e.to_string()))?;
        match resp.status().as_u16() {
            200 => {}
            404 => return Err(SourceError::UnknownStation(station.clone())),
            410 => return Ok(Poll::EndOfScript),
            503 => return Err(connection("station offline".into())),
            s => {
                return Err(SourceError::Protocol {
                    station: station.clone(),
                    message: format!("HTTP {s}"),
                })
            }
        }
        let block = resp.body_mut().read_to_vec().map_err(|e| connection(e.to_string()))?;
        let payload = parse_icy_metadata_block(&block).map_err(|e| SourceError::Protocol {
            station: station.clone(),
            message: e.to_string(),
        })?;
        Ok(Poll::Metadata(StreamMetadata {
            stream_title: payload.into_text(),
            captured_at: at,
            station_id: station.clone(),
        }))
    }
}

/// Library search over `GET {base}/search?q=`, answering a JSON array of
/// candidates.
#[derive(Debug, Clone)]
pub struct HttpLibraryClient {
    agent: Agent,
    base: String,
}

impl HttpLibraryClient {
    pub fn new(base: &str) -> Self {
        Self::with_timeout(base, DEFAULT_TIMEOUT)
    }

    pub fn with_timeout(base: &str, timeout: Duration) -> Self {
        Self {
            agent: agent(timeout),
            base: trim(base),
        }
    }
}

fn client_error(e: ureq::Error) -> ClientError {
    match e {
        ureq::Error::Timeout(_) => ClientError::Timeout,
        e => ClientError::Unavailable(e.to_string()),
    }
}

impl LibraryClient for HttpLibraryClient {
    fn search(&self, query: &str) -> Result<Vec<MatchCandidate>, ClientError> {
        let mut resp = self
            .agent
            .get(format!("{}/search", self.base))
            .query("q", query)
            .call()
            .map_err(client_error)?;
        match resp.status().as_u16() {
            200 => {}
            504 => return Err(ClientError::Timeout),
            s => return Err(ClientError::Unavailable(format!("HTTP {s}"))),
        }
        let body = resp.body_mut().read_to_vec().map_err(client_error)?;
        serde_json::from_slice(&body).map_err(|e| ClientError::Decode(e.to_string()))
    }
}
