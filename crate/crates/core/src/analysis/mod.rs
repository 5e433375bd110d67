//! Aggregations behind the dashboard panels, exports and share links.

mod csv_export;
mod detail;
mod dots;
mod fields;
mod hexbin;
mod histogram;
mod pca;
mod share;
mod stats;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use csv_export::{columns, export_csv, import_csv, Column, ColumnSet, CsvError, Provenance, COLUMNS};
pub use detail::{event_detail, ArtistSection, EventDetail, EventSection, StationSection, TrackSection};
pub use dots::{map_dots, MapDot};
pub use fields::{
    bar_counts, bar_counts_by_name, numeric_values, scatter, Bar, CategoryField, NumericField, ScatterPoint,
};
pub use hexbin::{hex_cell_for, hex_center, hexbin_aggregate, station_points, HexBin, HexCell, StationPoint};
pub use histogram::{histogram, HistBin};
pub use pca::{
    fix_sign, pca_fit, pca_project, pca_reconstruct, sample_covariance, symmetric_eigen, PcaError, PcaModel, PCA_DIM,
};
pub use share::{
    decode_share_token, decode_share_url, encode_share_token, encode_share_url, ShareError, ShareState, SHARE_PARAM,
    SHARE_VERSION,
};
pub use stats::{continent_table, ContinentRow, ContinentTable};

use crate::domain::TrackId;
use crate::store::EventRow;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AggError {
    #[error("unknown field {0:?}")]
    UnknownField(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("no values to aggregate")]
    EmptyInput,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaPoint {
    pub track_id: TrackId,
    pub title: String,
    pub pc1: f64,
    pub pc2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PcaView {
    pub fields: [&'static str; PCA_DIM],
    pub model: PcaModel,
    pub points: Vec<PcaPoint>,
}

/// Fits over the distinct tracks with audio features among `rows` and
/// projects each of them.
pub fn pca_view(rows: &[EventRow]) -> Result<PcaView, PcaError> {
    let mut tracks = BTreeMap::new();
    for row in rows {
        if let Some(t) = &row.track {
            if let Some(f) = t.features {
                tracks
                    .entry(t.track_id.clone())
                    .or_insert((t.title.clone(), f.pca_vector()));
            }
        }
    }
    let data: Vec<[f64; PCA_DIM]> = tracks.values().map(|(_, v)| *v).collect();
    let model = pca_fit(&data)?;
    let points = tracks
        .into_iter()
        .map(|(track_id, (title, v))| {
            let [pc1, pc2] = pca_project(&model, &v);
            PcaPoint {
                track_id,
                title,
                pc1,
                pc2,
            }
        })
        .collect();
    Ok(PcaView {
        fields: crate::domain::AudioFeatures::PCA_FIELDS,
        model,
        points,
    })
}
