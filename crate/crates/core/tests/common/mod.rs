//! Shared test helpers: a brute-force visibility oracle that evaluates every
//! intermediate sample for every pair, and seeded random inputs.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vistra::visibility::{Method, VgParams};
use vistra::TimeSeries;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_series(rng: &mut ChaCha8Rng, n: usize) -> TimeSeries {
    TimeSeries::new((0..n).map(|_| rng.random::<f64>()).collect(), 1.0).unwrap()
}

/// Height of the straight sight line at `tc`, written the way the line is
/// usually stated: anchored at `a`, slope `(xa - xb) / (ta - tb)`.
pub fn line_height(ta: f64, xa: f64, tb: f64, xb: f64, tc: f64) -> f64 {
    xa + (xa - xb) * (ta - tc) / (tb - ta)
}

/// Height at `tc` of the minor arc through `a` and `b` from the circle family
///
///   (t-ta)(t-tb) + (x-xa)(x-xb) + α[(t-ta)(xb-xa) - (x-xa)(tb-ta)] = 0.
///
/// Solved as a quadratic in `x` with the textbook formula; the minor-arc
/// root is the one on the opposite side of the chord from the centre.
pub fn arc_height(ta: f64, xa: f64, tb: f64, xb: f64, alpha: f64, tc: f64) -> f64 {
    let dt = tb - ta;
    let b = -(xa + xb) - alpha * dt;
    let c = xa * xb + (tc - ta) * (tc - tb) + alpha * (tc - ta) * (xb - xa) + alpha * xa * dt;
    let disc = (b * b - 4.0 * c).max(0.0).sqrt();
    let roots = [(-b + disc) / 2.0, (-b - disc) / 2.0];
    let centre = ((ta + tb) / 2.0 - alpha * (xb - xa) / 2.0, (xa + xb) / 2.0 + alpha * dt / 2.0);
    let side = |t: f64, x: f64| dt * (x - xa) - (xb - xa) * (t - ta);
    let centre_side = side(centre.0, centre.1);
    *roots
        .iter()
        .find(|&&x| side(tc, x) * centre_side < 0.0)
        .unwrap_or(&roots[if alpha > 0.0 { 1 } else { 0 }])
}

/// Edge list from the full O(n³) scan: every intermediate sample is counted,
/// a sample on or above the sight curve blocks.
pub fn oracle_edges(series: &TimeSeries, params: &VgParams) -> Vec<(usize, usize)> {
    let x = series.values();
    let t = series.times();
    let n = x.len();
    let m = match params.method {
        Method::Vg => 0,
        _ => params.m,
    };
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let mut blocked = 0;
            for c in (a + 1..b).rev() {
                let h = match params.method {
                    Method::Clpvg => arc_height(t[a], x[a], t[b], x[b], params.alpha, t[c]),
                    _ => line_height(t[a], x[a], t[b], x[b], t[c]),
                };
                if x[c] >= h {
                    blocked += 1;
                }
            }
            if blocked <= m {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Random graph with `n` nodes where each pair is an edge with probability `p`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> vistra::Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    vistra::Graph::new(n, edges).unwrap()
}

pub fn bin() -> std::path::PathBuf {
    std::path::PathBuf::from(env!("CARGO_BIN_EXE_vistra"))
}
