//! Graph embeddings, feature fusion and dimensionality reduction.

mod pca;
mod wl;

pub use pca::{pca_fit, pca_fit_variance, pca_transform, PcaModel};
pub use wl::{fnv1a64, wl_embed, wl_labels, WlConfig, FNV_OFFSET, FNV_PRIME};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Where a feature column came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMeta {
    pub name: String,
    pub channel: Option<String>,
    /// 0 for the visibility graph, 1 for its subgraph network.
    pub order: Option<u8>,
    pub window: Option<usize>,
}

impl ColumnMeta {
    pub fn named(name: impl Into<String>) -> Self {
        ColumnMeta {
            name: name.into(),
            channel: None,
            order: None,
            window: None,
        }
    }

    /// Columns for one embedding block, named `<channel>.o<order>[.w<window>].<k>`.
    pub fn block(channel: &str, order: u8, window: Option<usize>, dim: usize) -> Vec<Self> {
        (0..dim)
            .map(|k| {
                let name = match window {
                    Some(w) => format!("{channel}.o{order}.w{w}.{k}"),
                    None => format!("{channel}.o{order}.{k}"),
                };
                ColumnMeta {
                    name,
                    channel: Some(channel.to_string()),
                    order: Some(order),
                    window,
                }
            })
            .collect()
    }
}

/// One feature vector per signal with aligned labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<String>,
    pub ids: Vec<String>,
    pub snr_db: Vec<Option<f64>>,
    pub columns: Vec<ColumnMeta>,
}

impl FeatureMatrix {
    /// Matrix with generated ids and no SNR tags.
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<String>, columns: Vec<ColumnMeta>) -> Result<Self> {
        let ids = (0..rows.len()).map(|i| i.to_string()).collect();
        let snr_db = vec![None; rows.len()];
        Self::with_meta(rows, labels, ids, snr_db, columns)
    }

    pub fn with_meta(
        rows: Vec<Vec<f64>>,
        labels: Vec<String>,
        ids: Vec<String>,
        snr_db: Vec<Option<f64>>,
        columns: Vec<ColumnMeta>,
    ) -> Result<Self> {
        let m = FeatureMatrix {
            rows,
            labels,
            ids,
            snr_db,
            columns,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.rows.len();
        if self.labels.len() != n || self.ids.len() != n || self.snr_db.len() != n {
            return Err(Error::invalid(format!(
                "{n} rows but {} labels, {} ids, {} snr tags",
                self.labels.len(),
                self.ids.len(),
                self.snr_db.len()
            )));
        }
        let width = self.columns.len();
        if let Some(i) = self.rows.iter().position(|r| r.len() != width) {
            return Err(Error::invalid(format!(
                "row {i} has {} values, expected {width}",
                self.rows[i].len()
            )));
        }
        if self.rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("feature matrix contains non-finite values"));
        }
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    /// Rows at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
            ids: indices.iter().map(|&i| self.ids[i].clone()).collect(),
            snr_db: indices.iter().map(|&i| self.snr_db[i]).collect(),
            columns: self.columns.clone(),
        }
    }

    /// Horizontal concatenation of matrices describing the same signals.
    pub fn hstack(parts: &[FeatureMatrix]) -> Result<FeatureMatrix> {
        let Some(first) = parts.first() else {
            return Err(Error::invalid("nothing to stack"));
        };
        if let Some(p) = parts.iter().find(|p| p.ids != first.ids || p.labels != first.labels) {
            return Err(Error::invalid(format!(
                "row mismatch while stacking ({} vs {} rows)",
                p.n_rows(),
                first.n_rows()
            )));
        }
        let rows = (0..first.n_rows())
            .map(|i| parts.iter().flat_map(|p| p.rows[i].iter().copied()).collect())
            .collect();
        let columns = parts.iter().flat_map(|p| p.columns.iter().cloned()).collect();
        FeatureMatrix::with_meta(
            rows,
            first.labels.clone(),
            first.ids.clone(),
            first.snr_db.clone(),
            columns,
        )
    }
}

/// Horizontal concatenation of feature vectors, in the order given.
pub fn fuse<V: AsRef<[f64]>>(parts: &[V]) -> Result<Vec<f64>> {
    if parts.is_empty() {
        return Err(Error::invalid("nothing to fuse"));
    }
    Ok(parts.iter().flat_map(|p| p.as_ref().iter().copied()).collect())
}
