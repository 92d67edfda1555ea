//! Peak-detection compression.
//!
//! The series is padded with `w` zeros on both sides. Sample `x_k` is kept
//! when the mean of the maxima of its left window `x[k-w..=k]` and right
//! window `x[k..=k+w]` does not exceed `x_k`.

use super::TimeSeries;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeakDetectParams {
    pub w: usize,
}

impl PeakDetectParams {
    pub fn new(w: usize) -> Result<Self> {
        if w == 0 {
            return Err(Error::invalid("peak window must be >= 1"));
        }
        Ok(PeakDetectParams { w })
    }
}

/// Indices of the samples retained by the peak rule, in order.
pub fn peak_indices(values: &[f64], w: usize) -> Vec<usize> {
    let n = values.len();
    let at = |i: isize| -> f64 {
        if i < 0 || i as usize >= n {
            0.0
        } else {
            values[i as usize]
        }
    };
    let w = w as isize;
    (0..n)
        .filter(|&k| {
            let k = k as isize;
            let left = (k - w..=k).map(at).fold(f64::NEG_INFINITY, f64::max);
            let right = (k..=k + w).map(at).fold(f64::NEG_INFINITY, f64::max);
            (left + right) / 2.0 <= at(k)
        })
        .collect()
}

/// Keeps the samples passing the peak rule together with their original
/// timestamps. Fails when `w >= len` or when nothing is retained.
pub fn peak_compress(series: &TimeSeries, params: PeakDetectParams) -> Result<TimeSeries> {
    if params.w == 0 || params.w >= series.len() {
        return Err(Error::invalid(format!(
            "peak window {} must be in [1, {})",
            params.w,
            series.len()
        )));
    }
    let keep = peak_indices(series.values(), params.w);
    if keep.is_empty() {
        return Err(Error::invalid("peak detection retained no samples"));
    }
    let values = keep.iter().map(|&i| series.values()[i]).collect();
    let times = keep.iter().map(|&i| series.time(i)).collect();
    TimeSeries::with_times(values, times, series.dt())
}
