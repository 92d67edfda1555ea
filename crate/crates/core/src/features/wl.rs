//! Weisfeiler-Lehman subtree histogram embedding.
//!
//! Node labels start as hashed degrees. Each round replaces a label with the
//! hash of the label followed by the sorted multiset of neighbor labels.
//! Labels from every round (0..=h) are bucketed by `label % dim` and the
//! count vector is L2-normalized.
//!
//! The hash is 64-bit FNV-1a (offset basis `0xcbf29ce484222325`, prime
//! `0x100000001b3`) over the little-endian bytes of 64-bit words, so vectors
//! are identical on every platform.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
pub const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Leading word of the initial (degree) labels.
const DEGREE_TAG: u64 = 0x6465_6772_6565; // "degree"

pub fn fnv1a64(words: &[u64]) -> u64 {
    let mut h = FNV_OFFSET;
    for w in words {
        for byte in w.to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(FNV_PRIME);
        }
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WlConfig {
    pub h: usize,
    pub dim: usize,
}

impl Default for WlConfig {
    fn default() -> Self {
        WlConfig { h: 3, dim: 128 }
    }
}

impl WlConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::invalid("embedding dimension must be >= 1"));
        }
        Ok(())
    }
}

/// Node labels for rounds `0..=h`; `result[r][v]` is the label of `v` after
/// `r` rounds.
pub fn wl_labels(g: &Graph, h: usize) -> Vec<Vec<u64>> {
    let mut rounds = Vec::with_capacity(h + 1);
    let mut labels: Vec<u64> = g
        .degrees()
        .into_iter()
        .map(|d| fnv1a64(&[DEGREE_TAG, d as u64]))
        .collect();
    let mut buf = Vec::new();
    for _ in 0..h {
        let next = (0..g.node_count())
            .map(|v| {
                buf.clear();
                buf.push(labels[v]);
                let start = buf.len();
                buf.extend(g.neighbors(v).iter().map(|&u| labels[u]));
                buf[start..].sort_unstable();
                fnv1a64(&buf)
            })
            .collect();
        rounds.push(std::mem::replace(&mut labels, next));
    }
    rounds.push(labels);
    rounds
}

pub fn wl_embed(g: &Graph, cfg: &WlConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if g.node_count() == 0 {
        return Err(Error::invalid("cannot embed an empty graph"));
    }
    let mut hist = vec![0.0; cfg.dim];
    for round in wl_labels(g, cfg.h) {
        for label in round {
            hist[(label % cfg.dim as u64) as usize] += 1.0;
        }
    }
    let norm = hist.iter().map(|v| v * v).sum::<f64>().sqrt();
    hist.iter_mut().for_each(|v| *v /= norm);
    Ok(hist)
}
