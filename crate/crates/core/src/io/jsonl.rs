//! One JSON object per line:
//!
//! ```text
//! {"label": "QPSK", "snr_db": 10, "dt": 1.0, "channels": {"I": [...], "Q": [...]}}
//! ```
//!
//! Optional fields: `id`, `t0`, and `times` (explicit per-channel
//! timestamps, written for peak-compressed signals).

use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{read_to_string, write_bytes};
use crate::error::{Error, Result};
use crate::signals::{MultiChannelSignal, TimeSeries};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub label: String,
    pub snr_db: Option<f64>,
    pub dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    pub channels: IndexMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<IndexMap<String, Vec<f64>>>,
}

impl SignalRecord {
    /// `fallback_id` is used when the record carries no `id`.
    pub fn into_signal(self, fallback_id: String) -> Result<MultiChannelSignal> {
        let t0 = self.t0.unwrap_or(0.0);
        let mut channels = IndexMap::with_capacity(self.channels.len());
        for (name, values) in self.channels {
            let explicit = self.times.as_ref().and_then(|t| t.get(&name)).cloned();
            let series = match explicit {
                Some(times) => TimeSeries::with_times(values, times, self.dt),
                None => TimeSeries::with_t0(values, self.dt, t0),
            }
            .map_err(|e| Error::invalid(format!("channel {name}: {e}")))?;
            channels.insert(name, series);
        }
        MultiChannelSignal::new(self.id.unwrap_or(fallback_id), self.label, self.snr_db, channels)
    }
}

pub fn signal_to_record(s: &MultiChannelSignal) -> SignalRecord {
    let first = s.channels.values().next();
    let dt = first.map_or(1.0, TimeSeries::dt);
    let t0 = first.map_or(0.0, TimeSeries::t0);
    let explicit: IndexMap<String, Vec<f64>> = s
        .channels
        .iter()
        .filter_map(|(k, c)| c.explicit_times().map(|t| (k.clone(), t.to_vec())))
        .collect();
    SignalRecord {
        id: Some(s.id.clone()),
        label: s.label.clone(),
        snr_db: s.snr_db,
        dt,
        t0: (t0 != 0.0 && explicit.is_empty()).then_some(t0),
        channels: s
            .channels
            .iter()
            .map(|(k, c)| (k.clone(), c.values().to_vec()))
            .collect(),
        times: (!explicit.is_empty()).then_some(explicit),
    }
}

fn default_id(index: usize) -> String {
    format!("{index:06}")
}

fn parse_line(line: &str, index: usize) -> Result<MultiChannelSignal> {
    let record: SignalRecord = serde_json::from_str(line)?;
    record.into_signal(default_id(index))
}

/// Reads every record, failing on the first bad line.
pub fn read_signals(path: &Path) -> Result<Vec<MultiChannelSignal>> {
    let text = read_to_string(path)?;
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let signal = parse_line(line, out.len()).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: no + 1,
            msg: e.to_string(),
        })?;
        out.push(signal);
    }
    Ok(out)
}

/// Checks every line. Returns the number of valid records and one
/// `(line, message)` per invalid record.
pub fn validate_signals(path: &Path) -> Result<(usize, Vec<(usize, String)>)> {
    let text = read_to_string(path)?;
    let mut ok = 0;
    let mut errors = Vec::new();
    let mut index = 0;
    for (no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(line, index) {
            Ok(_) => ok += 1,
            Err(e) => errors.push((no + 1, e.to_string())),
        }
        index += 1;
    }
    Ok((ok, errors))
}

pub fn write_signals(path: &Path, signals: &[MultiChannelSignal]) -> Result<()> {
    let mut out = String::new();
    for s in signals {
        out += &serde_json::to_string(&signal_to_record(s))?;
        out.push('\n');
    }
    write_bytes(path, out.as_bytes())
}
