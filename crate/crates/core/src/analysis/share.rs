use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::EventId;
use crate::store::EventFilter;

pub const SHARE_VERSION: &str = "v1";
pub const SHARE_PARAM: &str = "state";

/// Everything needed to reopen a dashboard view.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShareState {
    pub filter: EventFilter,
    pub selected_event_ids: Vec<EventId>,
    /// Opaque to the server.
    pub panel_layout: String,
    /// BCP-47 language tag.
    pub language: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShareError {
    #[error("share link has no {SHARE_PARAM} parameter")]
    Missing,
    #[error("unsupported share link version {0:?}")]
    Version(String),
    #[error("corrupt share link: {0}")]
    Corrupt(String),
}

/// The state token alone: version prefix, a dot, and URL-safe base64 of the
/// state's JSON.
pub fn encode_share_token(state: &ShareState) -> String {
    let json = serde_json::to_vec(state).expect("share state serializes");
    format!("{SHARE_VERSION}.{}", URL_SAFE_NO_PAD.encode(json))
}

pub fn decode_share_token(token: &str) -> Result<ShareState, ShareError> {
    let (version, body) = token
        .split_once('.')
        .ok_or_else(|| ShareError::Corrupt("missing version prefix".into()))?;
    if version != SHARE_VERSION {
        return Err(ShareError::Version(version.to_string()));
    }
    let bytes = URL_SAFE_NO_PAD
        .decode(body)
        .map_err(|e| ShareError::Corrupt(e.to_string()))?;
    let state: ShareState = serde_json::from_slice(&bytes).map_err(|e| ShareError::Corrupt(e.to_string()))?;
    state
        .filter
        .validate()
        .map_err(|e| ShareError::Corrupt(e.to_string()))?;
    Ok(state)
}

/// `state=<token>`; the token alphabet needs no percent-encoding.
pub fn encode_share_url(state: &ShareState) -> String {
    format!("{SHARE_PARAM}={}", encode_share_token(state))
}

/// Accepts a full URL, a query string with or without `?`, or a bare token.
pub fn decode_share_url(qs: &str) -> Result<ShareState, ShareError> {
    let query = qs.rsplit_once('?').map_or(qs, |(_, q)| q);
    if !query.contains('=') {
        return decode_share_token(query);
    }
    let token = query
        .split('&')
        .filter_map(|kv| kv.split_once('='))
        .find(|(k, _)| *k == SHARE_PARAM)
        .map(|(_, v)| v)
        .ok_or(ShareError::Missing)?;
    decode_share_token(token)
}
