//! Plain-text edge lists: a header `n <node-count>` followed by one
//! `u v` line per edge, 0-indexed, `u < v`, sorted.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use super::{read_to_string, write_bytes};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn format_edgelist(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + g.edge_count() * 10);
    let _ = writeln!(out, "n {}", g.node_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parses an edge list. `origin` only labels error messages.
pub fn parse_edgelist(text: &str, origin: &Path) -> Result<Graph> {
    let err = |line: usize, msg: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty edge list".into()))?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", count] => count
            .parse::<usize>()
            .map_err(|_| err(1, format!("bad node count `{count}`")))?,
        _ => return Err(err(1, format!("expected `n <count>`, got `{header}`"))),
    };
    let mut seen = BTreeSet::new();
    for (no, line) in lines {
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = parts[..] else {
            return Err(err(no, format!("expected `u v`, got `{line}`")));
        };
        let parse = |s: &str| s.parse::<usize>().map_err(|_| err(no, format!("bad node id `{s}`")));
        let (u, v) = (parse(a)?, parse(b)?);
        if u == v {
            return Err(err(no, format!("self-loop on node {u}")));
        }
        if u >= n || v >= n {
            return Err(err(no, format!("endpoint out of range for n = {n}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(err(no, format!("duplicate edge {u} {v}")));
        }
    }
    Ok(Graph::from_canonical(n, seen.into_iter().collect()))
}

pub fn read_edgelist(path: &Path) -> Result<Graph> {
    parse_edgelist(&read_to_string(path)?, path)
}

pub fn write_edgelist(g: &Graph, path: &Path) -> Result<()> {
    write_bytes(path, format_edgelist(g).as_bytes())
}
