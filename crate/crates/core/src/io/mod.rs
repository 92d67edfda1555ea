//! On-disk formats: JSONL signals, edge lists and CSV tables.

mod edgelist;
mod graphdir;
mod jsonl;
mod table;

pub use edgelist::{format_edgelist, parse_edgelist, read_edgelist, write_edgelist};
pub use graphdir::{
    graph_file_name, list_graphs, read_labels, safe_id, write_labels, GraphEntry, LabelRow, LABELS_FILE,
};
pub use jsonl::{read_signals, signal_to_record, validate_signals, write_signals, SignalRecord};
pub use table::{read_features, write_degree_histogram, write_features};

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
