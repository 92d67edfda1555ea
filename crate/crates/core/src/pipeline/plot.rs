//! Plotting-ready tables. Nothing here draws; every writer emits a CSV (or
//! JSON) that plotting tools can read directly. Empty inputs produce a
//! header-only file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{avg_clustering, degree_distribution, DegreeDistribution, Graph};
use crate::io::write_bytes;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrAccuracy {
    /// `None` for clean signals.
    pub snr_db: Option<f64>,
    pub n: usize,
    pub correct: usize,
    pub accuracy: f64,
}

/// Groups `(snr, correct?)` outcomes by SNR, ascending, clean last.
pub fn accuracy_by_snr(outcomes: impl IntoIterator<Item = (Option<f64>, bool)>) -> Vec<SnrAccuracy> {
    let mut rows: Vec<SnrAccuracy> = Vec::new();
    for (snr, ok) in outcomes {
        let pos = rows.iter().position(|r| r.snr_db.map(f64::to_bits) == snr.map(f64::to_bits));
        let row = match pos {
            Some(p) => &mut rows[p],
            None => {
                rows.push(SnrAccuracy {
                    snr_db: snr,
                    n: 0,
                    correct: 0,
                    accuracy: 0.0,
                });
                rows.last_mut().expect("just pushed")
            }
        };
        row.n += 1;
        row.correct += usize::from(ok);
    }
    for r in &mut rows {
        r.accuracy = r.correct as f64 / r.n as f64;
    }
    rows.sort_by(|a, b| match (a.snr_db, b.snr_db) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    rows
}

fn csv_bytes<I, R>(header: &[&str], rows: I) -> Result<Vec<u8>>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::invalid(format!("csv: {e}"));
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    w.into_inner().map_err(|e| Error::invalid(format!("csv buffer: {e}")))
}

pub fn accuracy_csv(rows: &[SnrAccuracy]) -> Result<Vec<u8>> {
    csv_bytes(
        &["snr_db", "n", "correct", "accuracy"],
        rows.iter().map(|r| {
            [
                r.snr_db.map_or("clean".to_string(), |s| s.to_string()),
                r.n.to_string(),
                r.correct.to_string(),
                r.accuracy.to_string(),
            ]
        }),
    )
}

pub fn write_accuracy_vs_snr(path: &Path, rows: &[SnrAccuracy]) -> Result<()> {
    write_bytes(path, &accuracy_csv(rows)?)
}

/// Structural summary of one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub signal_id: String,
    pub channel: String,
    pub method: String,
    pub n: usize,
    pub m_edges: usize,
    pub avg_clustering: f64,
}

impl GraphMetrics {
    pub fn of(g: &Graph, signal_id: &str, channel: &str, method: &str) -> Self {
        GraphMetrics {
            signal_id: signal_id.to_string(),
            channel: channel.to_string(),
            method: method.to_string(),
            n: g.node_count(),
            m_edges: g.edge_count(),
            avg_clustering: avg_clustering(g),
        }
    }
}

pub fn metrics_csv(rows: &[GraphMetrics]) -> Result<Vec<u8>> {
    csv_bytes(
        &["signal_id", "channel", "method", "n", "m_edges", "avg_clustering"],
        rows.iter().map(|r| {
            [
                r.signal_id.clone(),
                r.channel.clone(),
                r.method.clone(),
                r.n.to_string(),
                r.m_edges.to_string(),
                r.avg_clustering.to_string(),
            ]
        }),
    )
}

pub fn write_metrics(path: &Path, rows: &[GraphMetrics]) -> Result<()> {
    write_bytes(path, &metrics_csv(rows)?)
}

/// `{"n": .., "counts": {"degree": count, ..}}`
pub fn degree_histogram_json(g: &Graph) -> Result<String> {
    let dist: DegreeDistribution = degree_distribution(g);
    Ok(serde_json::to_string(&dist)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_tables_have_headers() {
        assert_eq!(String::from_utf8(accuracy_csv(&[]).unwrap()).unwrap(), "snr_db,n,correct,accuracy\n");
        assert_eq!(
            String::from_utf8(metrics_csv(&[]).unwrap()).unwrap(),
            "signal_id,channel,method,n,m_edges,avg_clustering\n"
        );
    }

    #[test]
    fn snr_grouping() {
        let rows = accuracy_by_snr([(Some(10.0), true), (None, false), (Some(-2.0), true), (Some(10.0), false)]);
        assert_eq!(rows.iter().map(|r| r.snr_db).collect::<Vec<_>>(), [Some(-2.0), Some(10.0), None]);
        assert_eq!(rows[1].accuracy, 0.5);
        let text = String::from_utf8(accuracy_csv(&rows).unwrap()).unwrap();
        assert!(text.ends_with("clean,1,0,0\n"));
    }

    #[test]
    fn histogram_json() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(degree_histogram_json(&g).unwrap(), r#"{"counts":{"1":2,"2":1},"n":3}"#);
    }
}
