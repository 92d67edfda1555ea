//! Graph directories: `<dir>/<signal-id>/<channel>.edges` for visibility
//! graphs, `<channel>.sgn.edges` for their line graphs, and an optional
//! `labels.csv` (`id,label,snr_db`) at the top level.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::write_bytes;
use crate::error::{Error, Result};

pub const LABELS_FILE: &str = "labels.csv";

/// File-system-safe form of a signal id or channel name.
pub fn safe_id(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// `order` 0 is the graph itself, 1 its line graph.
pub fn graph_file_name(channel: &str, order: u8) -> String {
    match order {
        0 => format!("{}.edges", safe_id(channel)),
        _ => format!("{}.sgn.edges", safe_id(channel)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GraphEntry {
    pub signal: String,
    pub channel: String,
    pub order: u8,
    pub path: PathBuf,
}

fn read_dir_sorted(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .map(|e| e.map(|e| e.path()).map_err(|err| Error::io(dir, err)))
        .collect::<Result<Vec<_>>>()?;
    paths.sort();
    Ok(paths)
}

/// All graph files below `dir`, sorted by signal, then order, then channel.
pub fn list_graphs(dir: &Path) -> Result<Vec<GraphEntry>> {
    let mut out = Vec::new();
    for sub in read_dir_sorted(dir)? {
        if !sub.is_dir() {
            continue;
        }
        let signal = sub.file_name().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        for file in read_dir_sorted(&sub)? {
            let Some(name) = file.file_name().and_then(|s| s.to_str()) else {
                continue;
            };
            let (channel, order) = if let Some(c) = name.strip_suffix(".sgn.edges") {
                (c, 1)
            } else if let Some(c) = name.strip_suffix(".edges") {
                (c, 0)
            } else {
                continue;
            };
            out.push(GraphEntry {
                signal: signal.clone(),
                channel: channel.to_string(),
                order,
                path: file.clone(),
            });
        }
    }
    out.sort_by(|a, b| (&a.signal, a.order, &a.channel).cmp(&(&b.signal, b.order, &b.channel)));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelRow {
    pub label: String,
    pub snr_db: Option<f64>,
}

pub fn write_labels(path: &Path, rows: &[(String, LabelRow)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::invalid(format!("csv: {e}"));
    w.write_record(["id", "label", "snr_db"]).map_err(err)?;
    for (id, r) in rows {
        let snr = r.snr_db.map_or(String::new(), |s| s.to_string());
        w.write_record([safe_id(id).as_str(), r.label.as_str(), snr.as_str()]).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::invalid(format!("csv buffer: {e}")))?;
    write_bytes(path, &bytes)
}

/// Keyed by the path-safe signal id.
pub fn read_labels(path: &Path) -> Result<BTreeMap<String, LabelRow>> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut r = csv::Reader::from_path(path).map_err(|e| parse_err(0, e.to_string()))?;
    let mut out = BTreeMap::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| parse_err(e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 3 {
            return Err(parse_err(line, "expected id,label,snr_db".into()));
        }
        let snr_db = match rec[2].trim() {
            "" => None,
            s => Some(s.parse::<f64>().map_err(|_| parse_err(line, format!("bad snr `{s}`")))?),
        };
        out.insert(
            rec[0].to_string(),
            LabelRow {
                label: rec[1].to_string(),
                snr_db,
            },
        );
    }
    Ok(out)
}
