#![allow(clippy::needless_range_loop)]

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const PCA_DIM: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PcaError {
    #[error("principal components need at least 3 rows, got {0}")]
    InsufficientData(usize),
    #[error("feature rows have zero total variance")]
    Degenerate,
    #[error("feature row {0} contains a non-finite value")]
    NonFinite(usize),
}

/// Two-component model over the five audio descriptors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: [f64; PCA_DIM],
    /// Unit-length, mutually orthogonal rows.
    pub components: [[f64; PCA_DIM]; 2],
    /// Eigenvalues of the sample covariance for each component, descending.
    pub explained_variance: [f64; 2],
}

type Mat = [[f64; PCA_DIM]; PCA_DIM];

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and eigenvectors as columns of the second matrix.
pub fn symmetric_eigen(mut a: Mat) -> ([f64; PCA_DIM], Mat) {
    let n = PCA_DIM;
    let mut v = [[0.0; PCA_DIM]; PCA_DIM];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off.sqrt() <= 1e-300_f64.max(scale * 1e-17) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut values = [0.0; PCA_DIM];
    for (i, x) in values.iter_mut().enumerate() {
        *x = a[i][i];
    }
    (values, v)
}

/// Flips `v` so its largest-magnitude coordinate (first on ties) is positive.
pub fn fix_sign(v: &mut [f64; PCA_DIM]) {
    let mut best = 0;
    for i in 1..PCA_DIM {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

pub fn sample_covariance(rows: &[[f64; PCA_DIM]]) -> ([f64; PCA_DIM], Mat) {
    let n = rows.len() as f64;
    let mut mean = [0.0; PCA_DIM];
    for row in rows {
        for j in 0..PCA_DIM {
            mean[j] += row[j];
        }
    }
    for m in mean.iter_mut() {
        *m /= n;
    }
    let mut cov = [[0.0; PCA_DIM]; PCA_DIM];
    for row in rows {
        for i in 0..PCA_DIM {
            let di = row[i] - mean[i];
            for j in i..PCA_DIM {
                cov[i][j] += di * (row[j] - mean[j]);
            }
        }
    }
    for i in 0..PCA_DIM {
        for j in i..PCA_DIM {
            cov[i][j] /= n - 1.0;
            cov[j][i] = cov[i][j];
        }
    }
    (mean, cov)
}

pub fn pca_fit(rows: &[[f64; PCA_DIM]]) -> Result<PcaModel, PcaError> {
    if rows.len() < 3 {
        return Err(PcaError::InsufficientData(rows.len()));
    }
    if let Some(i) = rows.iter().position(|r| r.iter().any(|x| !x.is_finite())) {
        return Err(PcaError::NonFinite(i));
    }
    let (mean, cov) = sample_covariance(rows);
    let total: f64 = (0..PCA_DIM).map(|i| cov[i][i]).sum();
    if total <= 0.0 {
        return Err(PcaError::Degenerate);
    }
    let (values, vectors) = symmetric_eigen(cov);
    let mut order: Vec<usize> = (0..PCA_DIM).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let mut components = [[0.0; PCA_DIM]; 2];
    let mut explained_variance = [0.0; 2];
    for (k, &idx) in order.iter().take(2).enumerate() {
        for j in 0..PCA_DIM {
            components[k][j] = vectors[j][idx];
        }
        fix_sign(&mut components[k]);
        explained_variance[k] = values[idx].max(0.0);
    }
    Ok(PcaModel {
        mean,
        components,
        explained_variance,
    })
}

pub fn pca_project(model: &PcaModel, row: &[f64; PCA_DIM]) -> [f64; 2] {
    let mut out = [0.0; 2];
    for (k, comp) in model.components.iter().enumerate() {
        out[k] = (0..PCA_DIM).map(|j| (row[j] - model.mean[j]) * comp[j]).sum();
    }
    out
}

/// Maps the first `k` scores (k ≤ 2) back to feature space.
pub fn pca_reconstruct(model: &PcaModel, scores: &[f64; 2], k: usize) -> [f64; PCA_DIM] {
    let mut out = model.mean;
    for c in 0..k.min(2) {
        for j in 0..PCA_DIM {
            out[j] += scores[c] * model.components[c][j];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(a: &[f64; PCA_DIM], b: &[f64; PCA_DIM]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn single_axis() {
        let rows: Vec<[f64; 5]> = (0..10).map(|i| [i as f64 / 10.0, 0.3, 0.2, 0.1, 0.0]).collect();
        let m = pca_fit(&rows).unwrap();
        assert_eq!(m.components[0], [1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(m.explained_variance[1].abs() <= 1e-12);
    }

    #[test]
    fn errors() {
        assert_eq!(pca_fit(&[[0.0; 5]; 2]), Err(PcaError::InsufficientData(2)));
        assert_eq!(pca_fit(&[[0.5; 5]; 4]), Err(PcaError::Degenerate));
    }

    #[test]
    fn orthonormal_and_ordered() {
        let rows: Vec<[f64; 5]> = (0..30)
            .map(|i| {
                let t = i as f64;
                [
                    (t * 0.37).sin().abs(),
                    (t * 0.11).cos().abs(),
                    (t * 0.73).sin().powi(2),
                    (t * 1.7).cos().powi(2),
                    (t * 0.05).fract(),
                ]
            })
            .collect();
        let m = pca_fit(&rows).unwrap();
        assert!((dot(&m.components[0], &m.components[0]) - 1.0).abs() < 1e-9);
        assert!((dot(&m.components[1], &m.components[1]) - 1.0).abs() < 1e-9);
        assert!(dot(&m.components[0], &m.components[1]).abs() < 1e-9);
        assert!(m.explained_variance[0] >= m.explained_variance[1]);
        assert_eq!(pca_project(&m, &m.mean), [0.0, 0.0]);
    }
}
