//! Principal component analysis by symmetric eigendecomposition.
//!
//! With at least as many rows as columns the covariance matrix is
//! decomposed directly. Wider matrices use the Gram matrix `X Xᵀ`, which
//! has the same non-zero spectrum, and map its eigenvectors back through
//! `Xᵀ`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{ColumnMeta, FeatureMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// One unit-length direction per row, strongest first.
    pub components: Vec<Vec<f64>>,
    /// Variance along each component, non-increasing.
    pub explained_variance: Vec<f64>,
    /// Total variance of the training data.
    pub total_variance: f64,
}

impl PcaModel {
    pub fn theta(&self) -> usize {
        self.components.len()
    }

    pub fn explained_ratio(&self) -> f64 {
        if self.total_variance <= 0.0 {
            return 1.0;
        }
        self.explained_variance.iter().sum::<f64>() / self.total_variance
    }

    pub fn project(&self, row: &[f64]) -> Vec<f64> {
        self.components
            .iter()
            .map(|c| {
                c.iter()
                    .zip(row.iter().zip(&self.mean))
                    .map(|(w, (x, m))| w * (x - m))
                    .sum()
            })
            .collect()
    }
}

/// Full spectrum: (eigenvalues descending, matching unit eigenvectors).
struct Spectrum {
    values: Vec<f64>,
    vectors: Vec<DVector<f64>>,
    total: f64,
}

fn spectrum(x: &FeatureMatrix) -> Result<(Vec<f64>, Spectrum)> {
    let n = x.n_rows();
    let d = x.n_cols();
    if n < 2 {
        return Err(Error::invalid("PCA needs at least 2 rows"));
    }
    if d == 0 {
        return Err(Error::invalid("PCA needs at least 1 column"));
    }
    let mut mean = vec![0.0; d];
    for row in &x.rows {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let centered = DMatrix::from_fn(n, d, |i, j| x.rows[i][j] - mean[j]);
    let scale = 1.0 / (n as f64 - 1.0);

    let (mut pairs, total) = if d <= n {
        let cov = centered.tr_mul(&centered) * scale;
        let total = cov.trace();
        let eig = SymmetricEigen::new(cov);
        let pairs: Vec<(f64, DVector<f64>)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(k, &l)| (l.max(0.0), eig.eigenvectors.column(k).into_owned()))
            .collect();
        (pairs, total)
    } else {
        let gram = &centered * centered.transpose() * scale;
        let total = gram.trace();
        let eig = SymmetricEigen::new(gram);
        let tol = total.abs().max(f64::MIN_POSITIVE) * 1e-12;
        let pairs: Vec<(f64, DVector<f64>)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > tol)
            .map(|(k, &l)| {
                let u = eig.eigenvectors.column(k);
                let v = centered.tr_mul(&u);
                let norm = v.norm();
                (l, v / norm)
            })
            .collect();
        (pairs, total)
    };
    // stable order: by eigenvalue, descending
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut vectors: Vec<DVector<f64>> = pairs.into_iter().map(|p| p.1).collect();
    let need = (n - 1).min(d);
    complete_basis(&mut vectors, d, need);
    values.resize(vectors.len(), 0.0);
    for v in &mut vectors {
        orient(v);
    }
    Ok((
        mean,
        Spectrum {
            values,
            vectors,
            total: total.max(0.0),
        },
    ))
}

/// Extends an orthonormal set to `need` directions using the standard
/// basis, for zero-variance subspaces the Gram route cannot see.
fn complete_basis(vectors: &mut Vec<DVector<f64>>, d: usize, need: usize) {
    let mut j = 0;
    while vectors.len() < need && j < d {
        let mut e = DVector::zeros(d);
        e[j] = 1.0;
        for _ in 0..2 {
            for v in vectors.iter() {
                let p = v.dot(&e);
                e -= v * p;
            }
        }
        let norm = e.norm();
        if norm > 1e-6 {
            vectors.push(e / norm);
        }
        j += 1;
    }
}

/// Largest-magnitude entry (first one on ties) made positive.
fn orient(v: &mut DVector<f64>) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.neg_mut();
    }
}

fn model_from(mean: Vec<f64>, spec: Spectrum, theta: usize) -> PcaModel {
    PcaModel {
        mean,
        components: spec.vectors[..theta]
            .iter()
            .map(|v| v.iter().copied().collect())
            .collect(),
        explained_variance: spec.values[..theta].to_vec(),
        total_variance: spec.total,
    }
}

/// Top-`theta` principal directions; `1 <= theta <= min(rows - 1, cols)`.
pub fn pca_fit(x: &FeatureMatrix, theta: usize) -> Result<PcaModel> {
    let limit = x.n_rows().saturating_sub(1).min(x.n_cols());
    if theta == 0 || theta > limit {
        return Err(Error::invalid(format!("theta {theta} outside [1, {limit}]")));
    }
    let (mean, spec) = spectrum(x)?;
    Ok(model_from(mean, spec, theta))
}

/// Smallest number of components whose explained variance reaches
/// `target` of the total (capped at `min(rows - 1, cols)`).
pub fn pca_fit_variance(x: &FeatureMatrix, target: f64) -> Result<PcaModel> {
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::invalid(format!("variance target {target} outside (0, 1]")));
    }
    let limit = x.n_rows().saturating_sub(1).min(x.n_cols());
    let (mean, spec) = spectrum(x)?;
    let mut theta = limit.max(1);
    if spec.total > 0.0 {
        let mut acc = 0.0;
        for (k, v) in spec.values.iter().enumerate().take(limit) {
            acc += v;
            if acc >= target * spec.total * (1.0 - 1e-12) {
                theta = k + 1;
                break;
            }
        }
    } else {
        theta = 1;
    }
    Ok(model_from(mean, spec, theta))
}

pub fn pca_transform(model: &PcaModel, x: &FeatureMatrix) -> Result<FeatureMatrix> {
    if x.n_cols() != model.mean.len() {
        return Err(Error::invalid(format!(
            "matrix has {} columns, model expects {}",
            x.n_cols(),
            model.mean.len()
        )));
    }
    let rows = x.rows.iter().map(|r| model.project(r)).collect();
    let columns = (0..model.theta()).map(|k| ColumnMeta::named(format!("pc{k}"))).collect();
    FeatureMatrix::with_meta(rows, x.labels.clone(), x.ids.clone(), x.snr_db.clone(), columns)
}
