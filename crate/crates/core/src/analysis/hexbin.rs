use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::AggError;
use crate::domain::{Coordinates, StationId};
use crate::store::Corpus;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Axial coordinates of a pointy-top hexagon on the plate-carrée plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HexCell {
    pub q: i64,
    pub r: i64,
}

/// Cell containing `c` on the grid of edge length `size` degrees anchored at
/// (0°, 0°). Points on a shared edge go to the cell chosen by cube rounding.
pub fn hex_cell_for(c: Coordinates, size: f64) -> HexCell {
    let x = c.longitude / size;
    let y = c.latitude / size;
    let q = SQRT3 / 3.0 * x - y / 3.0;
    let r = 2.0 / 3.0 * y;
    cube_round(q, r)
}

fn cube_round(q: f64, r: f64) -> HexCell {
    let s = -q - r;
    let (mut rq, mut rr, rs) = (q.round(), r.round(), s.round());
    let (dq, dr, ds) = ((rq - q).abs(), (rr - r).abs(), (rs - s).abs());
    if dq > dr && dq > ds {
        rq = -rr - rs;
    } else if dr > ds {
        rr = -rq - rs;
    }
    HexCell {
        q: rq as i64,
        r: rr as i64,
    }
}

/// Center of a cell in degrees. Cells near the antimeridian may have centers
/// just outside [-180, 180]; the grid does not wrap.
pub fn hex_center(cell: HexCell, size: f64) -> Coordinates {
    let (q, r) = (cell.q as f64, cell.r as f64);
    Coordinates::new(size * SQRT3 * (q + r / 2.0), size * 1.5 * r)
}

/// A station position for hex binning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationPoint {
    pub station_id: StationId,
    pub coordinates: Coordinates,
    pub country_code: String,
}

pub fn station_points(corpus: &Corpus) -> Vec<StationPoint> {
    corpus
        .stations()
        .filter_map(|s| {
            let loc = corpus.location(&s.location_id)?;
            Some(StationPoint {
                station_id: s.station_id.clone(),
                coordinates: loc.coordinates,
                country_code: loc.country_code.clone(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexBin {
    pub q: i64,
    pub r: i64,
    pub center: Coordinates,
    pub station_count: usize,
    pub country_breakdown: BTreeMap<String, usize>,
}

/// Station counts per occupied cell, ordered by (q, r).
pub fn hexbin_aggregate(stations: &[StationPoint], resolution: f64) -> Result<Vec<HexBin>, AggError> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(AggError::Parameter(format!(
            "resolution must be a positive number of degrees, got {resolution}"
        )));
    }
    let mut cells: BTreeMap<HexCell, BTreeMap<String, usize>> = BTreeMap::new();
    for s in stations {
        let cell = hex_cell_for(s.coordinates, resolution);
        *cells
            .entry(cell)
            .or_default()
            .entry(s.country_code.clone())
            .or_default() += 1;
    }
    Ok(cells
        .into_iter()
        .map(|(cell, country_breakdown)| HexBin {
            q: cell.q,
            r: cell.r,
            center: hex_center(cell, resolution),
            station_count: country_breakdown.values().sum(),
            country_breakdown,
        })
        .collect())
}
