//! Netlist and simple-graph data model.

mod metrics;
mod topology;

use std::collections::BTreeMap;

pub use metrics::{
    balancedness, balancedness_weighted, cut_weight, hyperedge_cut, partition_volume, simple_ncut,
};
pub use topology::{avg_shortest_path, hypergraph_avg_path, PathStats, EXACT_PATH_LIMIT, PATH_SAMPLE_SOURCES};

use crate::error::{Error, Result};

/// A netlist before validation: nets may repeat pins or have fewer than two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawNetlist {
    pub node_weights: Vec<u32>,
    pub nets: Vec<Vec<usize>>,
}

impl RawNetlist {
    pub fn new(num_nodes: usize, nets: Vec<Vec<usize>>) -> Self {
        Self {
            node_weights: vec![1; num_nodes],
            nets,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.node_weights.len()
    }
}

impl From<&Hypergraph> for RawNetlist {
    fn from(hg: &Hypergraph) -> Self {
        Self {
            node_weights: hg.node_weights.clone(),
            nets: hg.nets.clone(),
        }
    }
}

/// Validated hypergraph. Each net lists at least two distinct nodes; the first
/// pin is treated as the net's driver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    node_weights: Vec<u32>,
    nets: Vec<Vec<usize>>,
    // CSR incidence: nets touching node v are incident[offsets[v]..offsets[v + 1]].
    offsets: Vec<usize>,
    incident: Vec<usize>,
}

impl Hypergraph {
    /// Unit node weights.
    pub fn new(num_nodes: usize, nets: Vec<Vec<usize>>) -> Result<Self> {
        Self::with_weights(vec![1; num_nodes], nets)
    }

    pub fn with_weights(node_weights: Vec<u32>, nets: Vec<Vec<usize>>) -> Result<Self> {
        let n = node_weights.len();
        if n == 0 {
            return Err(Error::InvalidHypergraph("no nodes".into()));
        }
        if nets.is_empty() {
            return Err(Error::InvalidHypergraph("no nets".into()));
        }
        let mut degree = vec![0usize; n];
        let mut stamp = vec![usize::MAX; n];
        for (e, net) in nets.iter().enumerate() {
            if net.len() < 2 {
                return Err(Error::InvalidHypergraph(format!(
                    "net {e} has {} pin(s); at least 2 required",
                    net.len()
                )));
            }
            for &v in net {
                if v >= n {
                    return Err(Error::InvalidHypergraph(format!(
                        "net {e} references node {v}, but there are only {n} nodes"
                    )));
                }
                if stamp[v] == e {
                    return Err(Error::InvalidHypergraph(format!(
                        "net {e} lists node {v} more than once"
                    )));
                }
                stamp[v] = e;
                degree[v] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets.clone();
        let mut incident = vec![0; *offsets.last().unwrap()];
        for (e, net) in nets.iter().enumerate() {
            for &v in net {
                incident[fill[v]] = e;
                fill[v] += 1;
            }
        }
        Ok(Self {
            node_weights,
            nets,
            offsets,
            incident,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.node_weights.len()
    }

    pub fn num_nets(&self) -> usize {
        self.nets.len()
    }

    pub fn nets(&self) -> &[Vec<usize>] {
        &self.nets
    }

    pub fn net(&self, e: usize) -> &[usize] {
        &self.nets[e]
    }

    pub fn node_weights(&self) -> &[u32] {
        &self.node_weights
    }

    /// Nets incident to `v`, in increasing net order.
    pub fn node_nets(&self, v: usize) -> &[usize] {
        &self.incident[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Number of nets incident to `v` (the node's pin count).
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_nodes()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn total_pins(&self) -> usize {
        self.incident.len()
    }
}

/// Simple undirected graph with positive real edge weights.
///
/// Edges are stored canonically: `u < v`, sorted, with duplicate pairs merged
/// by summing their weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    node_weights: Vec<u32>,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
    degrees: Vec<f64>,
}

impl WeightedGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        Self::with_weights(vec![1; n], edges)
    }

    pub fn with_weights(
        node_weights: Vec<u32>,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let n = node_weights.len();
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on node {u}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has non-positive weight {w}"
                )));
            }
            *merged.entry((u.min(v), u.max(v))).or_insert(0.0) += w;
        }
        let edges: Vec<_> = merged.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        let mut adjacency = vec![Vec::new(); n];
        let mut degrees = vec![0.0; n];
        for &(u, v, w) in &edges {
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
            degrees[u] += w;
            degrees[v] += w;
        }
        Ok(Self {
            node_weights,
            edges,
            adjacency,
            degrees,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.node_weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn node_weights(&self) -> &[u32] {
        &self.node_weights
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    /// Weighted degree `d_v = Σ_u A_vu`.
    pub fn degree(&self, v: usize) -> f64 {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn total_edge_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }
}

/// Hard assignment of nodes to parts `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionAssignment {
    parts: Vec<usize>,
    k: usize,
}

impl PartitionAssignment {
    pub fn new(parts: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::contract("part count must be at least 1"));
        }
        if let Some((i, &p)) = parts.iter().enumerate().find(|(_, &p)| p >= k) {
            return Err(Error::contract(format!(
                "node {i} assigned to part {p}, but k = {k}"
            )));
        }
        Ok(Self { parts, k })
    }

    /// Uses `max id + 1` parts (at least 2).
    pub fn from_parts(parts: Vec<usize>) -> Self {
        let k = parts.iter().copied().max().map_or(2, |m| (m + 1).max(2));
        Self { parts, k }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn part(&self, v: usize) -> usize {
        self.parts[v]
    }

    pub fn into_parts(self) -> Vec<usize> {
        self.parts
    }

    /// Node count per part.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &p in &self.parts {
            sizes[p] += 1;
        }
        sizes
    }

    /// Keeps the first `n` entries (drops auxiliary nodes such as star hubs).
    pub fn truncated(&self, n: usize) -> Self {
        Self {
            parts: self.parts[..n.min(self.parts.len())].to_vec(),
            k: self.k,
        }
    }

    pub(crate) fn ensure_len(&self, n: usize, what: &str) -> Result<()> {
        if self.parts.len() != n {
            return Err(Error::contract(format!(
                "partition has {} entries but the {what} has {n} nodes",
                self.parts.len()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_nets() {
        assert!(Hypergraph::new(3, vec![vec![0]]).is_err());
        assert!(Hypergraph::new(3, vec![vec![0, 0, 1]]).is_err());
        assert!(Hypergraph::new(3, vec![vec![0, 3]]).is_err());
        assert!(Hypergraph::new(0, vec![]).is_err());
        assert!(Hypergraph::new(3, vec![]).is_err());
    }

    #[test]
    fn incidence() {
        let hg = Hypergraph::new(4, vec![vec![0, 1], vec![1, 2, 3], vec![3, 1]]).unwrap();
        assert_eq!(hg.node_nets(1), &[0, 1, 2]);
        assert_eq!(hg.degree(0), 1);
        assert_eq!(hg.max_degree(), 3);
        assert_eq!(hg.total_pins(), 7);
    }

    #[test]
    fn graph_merges_duplicates() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 1.0), (1, 0, 0.5), (1, 2, 2.0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1, 1.5), (1, 2, 2.0)]);
        assert_eq!(g.degree(1), 3.5);
        let total: f64 = g.degrees().iter().sum();
        assert_eq!(total, 2.0 * g.total_edge_weight());
    }

    #[test]
    fn graph_rejects_self_loops_and_bad_weights() {
        assert!(WeightedGraph::from_edges(2, [(1, 1, 1.0)]).is_err());
        assert!(WeightedGraph::from_edges(2, [(0, 1, 0.0)]).is_err());
        assert!(WeightedGraph::from_edges(2, [(0, 1, f64::NAN)]).is_err());
        assert!(WeightedGraph::from_edges(2, [(0, 2, 1.0)]).is_err());
    }

    #[test]
    fn assignment_validation() {
        assert!(PartitionAssignment::new(vec![0, 2], 2).is_err());
        let pa = PartitionAssignment::new(vec![0, 1, 1], 2).unwrap();
        assert_eq!(pa.sizes(), vec![1, 2]);
        assert_eq!(PartitionAssignment::from_parts(vec![0, 2]).k(), 3);
        assert_eq!(PartitionAssignment::from_parts(vec![0, 0]).k(), 2);
    }
}
