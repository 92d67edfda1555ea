//! Visibility graph constructions.
//!
//! Every sample is a node. Samples `a < b` are joined when at most `m`
//! intermediate samples reach the visibility boundary between them, where
//! the boundary is the straight chord (VG, LPVG) or the minor arc of the
//! circle selected by `alpha` (CLPVG). A sample exactly on the boundary
//! counts as reaching it. Plain VG is LPVG with `m = 0`.

pub mod geometry;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use geometry::{arc_crossing, arc_height, chord_circle, ArcCrossing, ChordCircle, Point};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par::{self, Execution};
use crate::signals::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Vg,
    Lpvg,
    Clpvg,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Vg => "vg",
            Method::Lpvg => "lpvg",
            Method::Clpvg => "clpvg",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vg" => Ok(Method::Vg),
            "lpvg" => Ok(Method::Lpvg),
            "clpvg" => Ok(Method::Clpvg),
            other => Err(Error::invalid(format!("unknown method `{other}`"))),
        }
    }
}

/// Construction parameters. `m` is ignored for VG, `alpha` is only used by
/// CLPVG.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VgParams {
    pub method: Method,
    #[serde(default)]
    pub m: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn default_alpha() -> f64 {
    10.0
}

impl VgParams {
    pub fn vg() -> Self {
        VgParams {
            method: Method::Vg,
            m: 0,
            alpha: default_alpha(),
        }
    }

    pub fn lpvg(m: usize) -> Self {
        VgParams {
            method: Method::Lpvg,
            m,
            alpha: default_alpha(),
        }
    }

    pub fn clpvg(m: usize, alpha: f64) -> Self {
        VgParams {
            method: Method::Clpvg,
            m,
            alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.method == Method::Clpvg && (self.alpha == 0.0 || !self.alpha.is_finite()) {
            return Err(Error::invalid(format!(
                "alpha must be finite and non-zero, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// Same parameters with a different curvature.
    pub fn with_alpha(self, alpha: f64) -> Self {
        VgParams { alpha, ..self }
    }
}

pub fn build_vg(series: &TimeSeries) -> Result<Graph> {
    build(series, &VgParams::vg(), Execution::default())
}

pub fn build_lpvg(series: &TimeSeries, m: usize) -> Result<Graph> {
    build(series, &VgParams::lpvg(m), Execution::default())
}

pub fn build_clpvg(series: &TimeSeries, m: usize, alpha: f64) -> Result<Graph> {
    build(series, &VgParams::clpvg(m, alpha), Execution::default())
}

/// Builds the graph selected by `params`, spreading rows over threads when
/// `exec` is parallel. The edge set does not depend on `exec`.
pub fn build(series: &TimeSeries, params: &VgParams, exec: Execution) -> Result<Graph> {
    params.validate()?;
    if series.len() < 2 {
        return Err(Error::invalid(format!(
            "visibility graph needs at least 2 samples, got {}",
            series.len()
        )));
    }
    let points: Vec<Point> = series
        .values()
        .iter()
        .enumerate()
        .map(|(i, &x)| Point::new(series.time(i), x))
        .collect();
    let edges = match params.method {
        Method::Vg => scan(&points, 0, exec, line_blocks),
        Method::Lpvg => scan(&points, params.m, exec, line_blocks),
        Method::Clpvg => {
            let alpha = params.alpha;
            scan(&points, params.m, exec, move |a, b, c| arc_blocks(a, b, c, alpha))
        }
    };
    Ok(Graph::from_canonical(points.len(), edges))
}

/// `c` reaches the straight chord from `a` to `b`.
#[inline]
fn line_blocks(a: Point, b: Point, c: Point) -> bool {
    c.x >= a.x + (b.x - a.x) * (c.t - a.t) / (b.t - a.t)
}

/// `c` reaches the minor arc from `a` to `b`.
#[inline]
fn arc_blocks(a: Point, b: Point, c: Point, alpha: f64) -> bool {
    let cross = geometry::crossing_unchecked(a, b, alpha, c.t);
    c.x - cross.chord >= cross.offset
}

/// For every pair, counts blocking intermediates and stops as soon as the
/// count exceeds `m`. Rows are independent so they can run in parallel.
fn scan<F>(points: &[Point], m: usize, exec: Execution, blocks: F) -> Vec<(usize, usize)>
where
    F: Fn(Point, Point, Point) -> bool + Sync + Send,
{
    let n = points.len();
    let rows = par::map_range(n - 1, exec, |a| {
        let pa = points[a];
        let mut row = Vec::new();
        for b in a + 1..n {
            let pb = points[b];
            let mut hits = 0;
            let mut visible = true;
            for &pc in &points[a + 1..b] {
                if blocks(pa, pb, pc) {
                    hits += 1;
                    if hits > m {
                        visible = false;
                        break;
                    }
                }
            }
            if visible {
                row.push((a, b));
            }
        }
        row
    });
    rows.concat()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec(), 1.0).unwrap()
    }

    fn pairs_within(n: usize, gap: usize) -> Vec<(usize, usize)> {
        (0..n)
            .flat_map(|a| (a + 1..n).filter(move |b| b - a <= gap).map(move |b| (a, b)))
            .collect()
    }

    #[test]
    fn constant_series() {
        let s = ts(&[1.5; 6]);
        assert_eq!(build_vg(&s).unwrap().edges(), pairs_within(6, 1));
        assert_eq!(build_lpvg(&s, 1).unwrap().edges(), pairs_within(6, 2));
        assert_eq!(build_clpvg(&s, 0, -2.0).unwrap().edges(), pairs_within(6, 6));
        assert_eq!(build_clpvg(&s, 1, 2.0).unwrap().edges(), pairs_within(6, 2));
    }

    #[test]
    fn convex_series_is_complete() {
        let s = ts(&[0.0, 1.0, 4.0, 9.0, 16.0]);
        assert_eq!(build_vg(&s).unwrap().edge_count(), 10);
    }

    #[test]
    fn two_samples() {
        let s = ts(&[3.0, -1.0]);
        for g in [
            build_vg(&s).unwrap(),
            build_lpvg(&s, 3).unwrap(),
            build_clpvg(&s, 0, 10.0).unwrap(),
        ] {
            assert_eq!(g.edges(), &[(0, 1)]);
        }
    }

    #[test]
    fn large_m_is_complete() {
        let s = ts(&[0.3, 5.0, -2.0, 7.0, 1.0, 0.0]);
        assert_eq!(build_lpvg(&s, 4).unwrap().edge_count(), 15);
    }

    #[test]
    fn errors() {
        assert!(build_vg(&ts(&[1.0])).is_err());
        assert!(build_clpvg(&ts(&[1.0, 2.0]), 1, 0.0).is_err());
        assert!("hvg".parse::<Method>().is_err());
    }

    #[test]
    fn m_ignored_for_vg() {
        let s = ts(&[1.0, 0.0, 3.0, 0.5, 2.0, 0.1, 4.0]);
        let p = VgParams { m: 5, ..VgParams::vg() };
        assert_eq!(build(&s, &p, Execution::Sequential).unwrap(), build_vg(&s).unwrap());
    }

    #[test]
    fn explicit_timestamps_are_used() {
        // the middle sample blocks on a uniform grid but not when it sits
        // close to the tall endpoint
        let v = vec![0.0, 2.0, 3.0];
        let uniform = TimeSeries::new(v.clone(), 1.0).unwrap();
        let skewed = TimeSeries::with_times(v, vec![0.0, 0.9, 1.0], 0.1).unwrap();
        assert!(!build_vg(&uniform).unwrap().has_edge(0, 2));
        assert!(build_vg(&skewed).unwrap().has_edge(0, 2));
    }
}
