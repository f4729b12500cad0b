//! Edge-list export for expanded graphs.
//!
//! ```text
//! <n> <m>
//! <u> <v> <w>     × m   (0-based, u < v, w printed in shortest round-trip form)
//! <node weight>   × n   (0 allowed, e.g. star hubs)
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hypergraph::WeightedGraph;

pub fn emit_edge_list(g: &WeightedGraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.num_nodes(), g.num_edges()).unwrap();
    for &(u, v, w) in g.edges() {
        writeln!(out, "{u} {v} {w}").unwrap();
    }
    for &w in g.node_weights() {
        writeln!(out, "{w}").unwrap();
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<WeightedGraph> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(hl, format!("invalid count `{t}`"))))
        .collect::<Result<_>>()?;
    let [n, m] = nums[..] else {
        return Err(Error::parse(hl, "header must be `n m`"));
    };
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, line) = lines.next().ok_or_else(|| Error::parse(hl, format!("expected {m} edges")))?;
        let t: Vec<&str> = line.split_whitespace().collect();
        let [u, v, w] = t[..] else {
            return Err(Error::parse(ln, "edge line must be `u v w`"));
        };
        let bad = |what: &str| Error::parse(ln, format!("invalid {what}"));
        edges.push((
            u.parse().map_err(|_| bad("u"))?,
            v.parse().map_err(|_| bad("v"))?,
            w.parse().map_err(|_| bad("weight"))?,
        ));
    }
    let mut weights = Vec::with_capacity(n);
    for _ in 0..n {
        let (ln, line) = lines.next().ok_or_else(|| Error::parse(hl, format!("expected {n} node weights")))?;
        weights.push(line.parse().map_err(|_| Error::parse(ln, "invalid node weight"))?);
    }
    WeightedGraph::with_weights(weights, edges)
}
