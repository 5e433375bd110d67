use thiserror::Error;

use crate::domain::Violation;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{table} {id} is invalid: {}", violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid {
        table: &'static str,
        id: String,
        violations: Vec<Violation>,
    },
    #[error("integrity error: referenced {table} {id} does not exist")]
    DanglingReference { table: &'static str, id: String },
    #[error("{table} {id} not found")]
    NotFound { table: &'static str, id: String },
    #[error("station {0} has no matched events; reliability is undefined")]
    UndefinedReliability(String),
    #[error("invalid filter: {0}")]
    Filter(String),
    #[error("corpus file {path}: {message}")]
    Format { path: String, message: String },
    #[error("corpus io at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
