//! Undirected simple graphs over `0..n` and the structural measures used on
//! visibility graphs.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Undirected simple graph. Edges are stored as `(u, v)` with `u < v` in
/// sorted order, adjacency lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from arbitrary-order pairs. Pairs are normalized to
    /// `u < v` and repeated pairs collapse into one edge.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::invalid(format!("self-loop on node {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::invalid(format!("edge ({a}, {b}) out of range for n = {n}")));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_canonical(n, list))
    }

    /// `edges` must already be sorted, deduplicated, `u < v < n`.
    pub(crate) fn from_canonical(n: usize, edges: Vec<(usize, usize)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|&(u, v)| u < v && v < n));
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Same edge structure with node `i` renamed to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::invalid("permutation length differs from node count"));
        }
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }
}

/// Histogram of node degrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeDistribution {
    pub counts: BTreeMap<usize, usize>,
    pub n: usize,
}

pub fn degree_distribution(g: &Graph) -> DegreeDistribution {
    let mut counts = BTreeMap::new();
    for d in g.degrees() {
        *counts.entry(d).or_insert(0) += 1;
    }
    DegreeDistribution { counts, n: g.n }
}

/// Number of triangles through each node.
pub fn triangles(g: &Graph) -> Vec<usize> {
    let mut tri = vec![0usize; g.n];
    for &(u, v) in &g.edges {
        let common = sorted_intersection_count(&g.adj[u], &g.adj[v]);
        tri[u] += common;
        tri[v] += common;
    }
    // each triangle at u is seen from both of its edges incident to u
    tri.iter_mut().for_each(|t| *t /= 2);
    tri
}

fn sorted_intersection_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Local clustering per node; nodes of degree < 2 get 0.
pub fn local_clustering(g: &Graph) -> Vec<f64> {
    triangles(g)
        .into_iter()
        .zip(g.degrees())
        .map(|(t, d)| {
            if d < 2 {
                0.0
            } else {
                2.0 * t as f64 / (d * (d - 1)) as f64
            }
        })
        .collect()
}

/// Mean local clustering over all nodes (0 for the empty graph).
pub fn avg_clustering(g: &Graph) -> f64 {
    if g.n == 0 {
        return 0.0;
    }
    local_clustering(g).iter().sum::<f64>() / g.n as f64
}

/// First-order subgraph network, i.e. the line graph.
///
/// Node `k` of the result stands for `g.edges()[k]`; two nodes are adjacent
/// when their source edges share an endpoint.
pub fn sgn1(g: &Graph) -> Result<Graph> {
    if g.edges.is_empty() {
        return Err(Error::invalid("subgraph network of an edgeless graph is undefined"));
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.n];
    for (k, &(u, v)) in g.edges.iter().enumerate() {
        incident[u].push(k);
        incident[v].push(k);
    }
    let total: usize = incident.iter().map(|l| l.len() * l.len().saturating_sub(1) / 2).sum();
    let mut edges = Vec::with_capacity(total);
    for list in &incident {
        // ids are pushed in increasing order, so i < j gives a < b
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                edges.push((a, b));
            }
        }
    }
    // two distinct edges of a simple graph share at most one endpoint,
    // so no pair is produced twice
    edges.sort_unstable();
    Ok(Graph::from_canonical(g.edges.len(), edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path3() -> Graph {
        Graph::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    #[test]
    fn construction_rules() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        let g = Graph::new(3, [(2, 1), (1, 2), (0, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn degree_histograms() {
        let dd = degree_distribution(&path3());
        assert_eq!(dd.counts, BTreeMap::from([(1, 2), (2, 1)]));
        assert_eq!(degree_distribution(&complete(4)).counts, BTreeMap::from([(3, 4)]));
        let empty = Graph::new(3, []).unwrap();
        assert_eq!(degree_distribution(&empty).counts, BTreeMap::from([(0, 3)]));
    }

    #[test]
    fn clustering_values() {
        assert_eq!(avg_clustering(&complete(3)), 1.0);
        assert_eq!(avg_clustering(&path3()), 0.0);
        let k4_minus = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert!((avg_clustering(&k4_minus) - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn line_graphs() {
        let l = sgn1(&path3()).unwrap();
        assert_eq!((l.node_count(), l.edges()), (2, &[(0, 1)][..]));
        assert_eq!(sgn1(&complete(3)).unwrap(), complete(3));
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(sgn1(&star).unwrap(), complete(3));
        assert!(sgn1(&Graph::new(2, []).unwrap()).is_err());
    }

    #[test]
    fn line_graph_of_disconnected_input() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let l = sgn1(&g).unwrap();
        assert_eq!(l.node_count(), 2);
        assert_eq!(l.edge_count(), 0);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..25).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n), 0..80).prop_map(move |pairs| {
                Graph::new(n, pairs.into_iter().filter(|(a, b)| a != b)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn line_graph_identities(g in arb_graph()) {
            prop_assume!(g.edge_count() > 0);
            let l = sgn1(&g).unwrap();
            prop_assert_eq!(l.node_count(), g.edge_count());
            for (k, &(u, v)) in g.edges().iter().enumerate() {
                prop_assert_eq!(l.degree(k), g.degree(u) + g.degree(v) - 2);
            }
            let expected: usize = g.degrees().iter().map(|d| d * d.saturating_sub(1) / 2).sum();
            prop_assert_eq!(l.edge_count(), expected);
        }

        #[test]
        fn degree_sums(g in arb_graph()) {
            let dd = degree_distribution(&g);
            prop_assert_eq!(dd.counts.values().sum::<usize>(), g.node_count());
            let weighted: usize = dd.counts.iter().map(|(d, c)| d * c).sum();
            prop_assert_eq!(weighted, 2 * g.edge_count());
            let c = avg_clustering(&g);
            prop_assert!((0.0..=1.0).contains(&c));
        }
    }
}
