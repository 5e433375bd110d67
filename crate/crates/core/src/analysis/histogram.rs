use serde::{Deserialize, Serialize};

use super::AggError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistBin {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

/// Equal-width bins over [min, max]. Each bin is half-open except the last,
/// which also takes max. When every value is equal there is one bin.
pub fn histogram(values: &[f64], bin_count: usize) -> Result<Vec<HistBin>, AggError> {
    if values.is_empty() {
        return Err(AggError::EmptyInput);
    }
    if bin_count == 0 {
        return Err(AggError::Parameter("bin count must be at least 1".into()));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(AggError::Parameter(format!("non-finite value {v}")));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return Ok(vec![HistBin {
            start: min,
            end: max,
            count: values.len(),
        }]);
    }
    let k = bin_count;
    let edge = |i: usize| {
        if i == k {
            max
        } else {
            min + (max - min) * i as f64 / k as f64
        }
    };
    let mut counts = vec![0usize; k];
    for &v in values {
        let mut i = (((v - min) / (max - min)) * k as f64).floor() as usize;
        i = i.min(k - 1);
        // The float estimate can land one bin off near an edge; the reported
        // edges are authoritative.
        while i > 0 && v < edge(i) {
            i -= 1;
        }
        while i + 1 < k && v >= edge(i + 1) {
            i += 1;
        }
        counts[i] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistBin {
            start: edge(i),
            end: edge(i + 1),
            count,
        })
        .collect())
}
