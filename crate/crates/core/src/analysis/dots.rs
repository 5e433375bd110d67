use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::AggError;
use crate::domain::{Coordinates, EventId};
use crate::store::EventRow;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapDot {
    pub position: Coordinates,
    pub event_count: usize,
    pub contains_selected: bool,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

fn key(c: Coordinates) -> (u64, u64) {
    ((c.longitude + 0.0).to_bits(), (c.latitude + 0.0).to_bits())
}

/// Event counts per station position. Positions closer than `merge_radius`
/// degrees (euclidean on the lon/lat plane) are merged transitively and drawn
/// at their event-weighted centroid. Dots come back largest first.
pub fn map_dots(rows: &[EventRow], merge_radius: f64, selected: &[EventId]) -> Result<Vec<MapDot>, AggError> {
    if !(merge_radius.is_finite() && merge_radius >= 0.0) {
        return Err(AggError::Parameter(format!(
            "merge radius must be a nonnegative number of degrees, got {merge_radius}"
        )));
    }
    let selected: HashSet<&EventId> = selected.iter().collect();
    let mut groups: BTreeMap<(u64, u64), (Coordinates, usize, bool)> = BTreeMap::new();
    for row in rows {
        let c = row.location.coordinates;
        let g = groups.entry(key(c)).or_insert((c, 0, false));
        g.1 += 1;
        g.2 |= selected.contains(&row.event.event_id);
    }
    let groups: Vec<(Coordinates, usize, bool)> = groups.into_values().collect();
    let mut dsu = Dsu((0..groups.len()).collect());
    if merge_radius > 0.0 {
        let cell = |c: Coordinates| {
            (
                (c.longitude / merge_radius).floor() as i64,
                (c.latitude / merge_radius).floor() as i64,
            )
        };
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, g) in groups.iter().enumerate() {
            grid.entry(cell(g.0)).or_default().push(i);
        }
        let r2 = merge_radius * merge_radius;
        for (i, g) in groups.iter().enumerate() {
            let (cx, cy) = cell(g.0);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for &j in grid.get(&(cx + dx, cy + dy)).into_iter().flatten() {
                        if j <= i {
                            continue;
                        }
                        let h = groups[j].0;
                        let d2 = (g.0.longitude - h.longitude).powi(2) + (g.0.latitude - h.latitude).powi(2);
                        if d2 <= r2 {
                            dsu.union(i, j);
                        }
                    }
                }
            }
        }
    }
    let mut merged: BTreeMap<usize, (f64, f64, usize, bool)> = BTreeMap::new();
    for (i, (c, n, sel)) in groups.iter().enumerate() {
        let m = merged.entry(dsu.find(i)).or_insert((0.0, 0.0, 0, false));
        m.0 += c.longitude * *n as f64;
        m.1 += c.latitude * *n as f64;
        m.2 += n;
        m.3 |= sel;
    }
    let mut dots: Vec<MapDot> = merged
        .into_values()
        .map(|(x, y, n, sel)| MapDot {
            position: Coordinates::new(x / n as f64, y / n as f64),
            event_count: n,
            contains_selected: sel,
        })
        .collect();
    dots.sort_by(|a, b| {
        b.event_count
            .cmp(&a.event_count)
            .then(a.position.longitude.total_cmp(&b.position.longitude))
            .then(a.position.latitude.total_cmp(&b.position.latitude))
    });
    Ok(dots)
}
