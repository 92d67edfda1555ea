//! CSV tables: feature matrices (`label` column then feature columns) and
//! degree histograms (`degree,count`).

use std::path::Path;

use super::write_bytes;
use crate::error::{Error, Result};
use crate::features::{ColumnMeta, FeatureMatrix};
use crate::graph::DegreeDistribution;

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: e.to_string(),
    }
}

fn finish(path: &Path, w: csv::Writer<Vec<u8>>) -> Result<()> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::invalid(format!("csv buffer: {e}")))?;
    write_bytes(path, &bytes)
}

pub fn write_features(path: &Path, x: &FeatureMatrix) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("label").chain(x.columns.iter().map(|c| c.name.as_str()));
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for (label, row) in x.labels.iter().zip(&x.rows) {
        let fields = std::iter::once(label.clone()).chain(row.iter().map(|v| v.to_string()));
        w.write_record(fields).map_err(|e| csv_err(path, e))?;
    }
    finish(path, w)
}

pub fn read_features(path: &Path) -> Result<FeatureMatrix> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = r.headers().map_err(|e| csv_err(path, e))?.clone();
    if header.get(0) != Some("label") {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            msg: "first column must be `label`".into(),
        });
    }
    let columns: Vec<ColumnMeta> = header.iter().skip(1).map(ColumnMeta::named).collect();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        labels.push(rec[0].to_string());
        let row = rec
            .iter()
            .skip(1)
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    msg: format!("bad number `{f}`"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    FeatureMatrix::new(rows, labels, columns)
}

pub fn write_degree_histogram(path: &Path, dist: &DegreeDistribution) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["degree", "count"]).map_err(|e| csv_err(path, e))?;
    for (d, c) in &dist.counts {
        w.write_record([d.to_string(), c.to_string()])
            .map_err(|e| csv_err(path, e))?;
    }
    finish(path, w)
}
