use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{Hypergraph, WeightedGraph};
use crate::error::{Error, Result};
use crate::rng::BenchRng;

/// Components at most this large get exact all-pairs BFS.
pub const EXACT_PATH_LIMIT: usize = 2000;
/// Number of BFS sources sampled on larger components.
pub const PATH_SAMPLE_SOURCES: usize = 64;

/// Mean unweighted hop distance over ordered reachable pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathStats {
    pub mean: f64,
    /// Number of ordered (source, target) pairs averaged over.
    pub pairs: u64,
    pub component_nodes: usize,
    pub total_nodes: usize,
    /// False when the graph is disconnected and only the largest component was used.
    pub connected: bool,
    pub sources: usize,
    pub sampled: bool,
}

/// Average shortest path on `g`, with every edge counted as one hop.
///
/// Disconnected graphs are measured on their largest component and flagged.
/// `seed` only matters when the component exceeds [`EXACT_PATH_LIMIT`].
pub fn avg_shortest_path(g: &WeightedGraph, seed: u64) -> Result<PathStats> {
    path_stats(NodeAdjacency::Graph(g), seed)
}

/// Average shortest path of a hypergraph under clique semantics: two nodes are
/// one hop apart when they share a net. Computed without materializing the
/// clique expansion.
pub fn hypergraph_avg_path(hg: &Hypergraph, seed: u64) -> Result<PathStats> {
    path_stats(NodeAdjacency::Hyper(hg), seed)
}

enum NodeAdjacency<'a> {
    Graph(&'a WeightedGraph),
    Hyper(&'a Hypergraph),
}

impl NodeAdjacency<'_> {
    fn num_nodes(&self) -> usize {
        match self {
            NodeAdjacency::Graph(g) => g.num_nodes(),
            NodeAdjacency::Hyper(h) => h.num_nodes(),
        }
    }

    fn num_nets(&self) -> usize {
        match self {
            NodeAdjacency::Graph(_) => 0,
            NodeAdjacency::Hyper(h) => h.num_nets(),
        }
    }

    /// BFS from `src`; returns the sum of distances and the number of reached
    /// nodes other than `src`. `dist` must be all `u32::MAX` on entry and is
    /// restored before returning.
    fn bfs(&self, src: usize, dist: &mut [u32], net_seen: &mut [bool], mut visit: impl FnMut(usize)) -> (u64, u64) {
        let mut queue = VecDeque::new();
        let mut touched = vec![src];
        let mut touched_nets = Vec::new();
        dist[src] = 0;
        queue.push_back(src);
        let (mut sum, mut count) = (0u64, 0u64);
        while let Some(v) = queue.pop_front() {
            visit(v);
            let next = dist[v] + 1;
            let mut relax = |u: usize, queue: &mut VecDeque<usize>, touched: &mut Vec<usize>| {
                if dist[u] == u32::MAX {
                    dist[u] = next;
                    sum += next as u64;
                    count += 1;
                    touched.push(u);
                    queue.push_back(u);
                }
            };
            match self {
                NodeAdjacency::Graph(g) => {
                    for &(u, _) in g.neighbors(v) {
                        relax(u, &mut queue, &mut touched);
                    }
                }
                NodeAdjacency::Hyper(h) => {
                    for &e in h.node_nets(v) {
                        if net_seen[e] {
                            continue;
                        }
                        net_seen[e] = true;
                        touched_nets.push(e);
                        for &u in h.net(e) {
                            relax(u, &mut queue, &mut touched);
                        }
                    }
                }
            }
        }
        for v in touched {
            dist[v] = u32::MAX;
        }
        for e in touched_nets {
            net_seen[e] = false;
        }
        (sum, count)
    }
}

fn path_stats(adj: NodeAdjacency<'_>, seed: u64) -> Result<PathStats> {
    let n = adj.num_nodes();
    if n == 0 {
        return Err(Error::contract("path statistics of an empty graph"));
    }
    let mut dist = vec![u32::MAX; n];
    let mut net_seen = vec![false; adj.num_nets()];

    // Largest component; ties go to the component holding the smallest node id.
    let mut comp = vec![usize::MAX; n];
    let mut best: Option<(usize, usize)> = None;
    let mut label = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut size = 0;
        adj.bfs(s, &mut dist, &mut net_seen, |v| {
            comp[v] = label;
            size += 1;
        });
        if best.is_none_or(|(_, b)| size > b) {
            best = Some((label, size));
        }
        label += 1;
    }
    let (largest, component_nodes) = best.unwrap();
    let members: Vec<usize> = (0..n).filter(|&v| comp[v] == largest).collect();

    let sampled = component_nodes > EXACT_PATH_LIMIT;
    let sources = if sampled {
        let mut shuffled = members.clone();
        BenchRng::seed_from_u64(seed).shuffle(&mut shuffled);
        shuffled.truncate(PATH_SAMPLE_SOURCES);
        shuffled
    } else {
        members
    };

    let (mut sum, mut pairs) = (0u64, 0u64);
    for &s in &sources {
        let (s_sum, s_count) = adj.bfs(s, &mut dist, &mut net_seen, |_| {});
        sum += s_sum;
        pairs += s_count;
    }
    Ok(PathStats {
        mean: if pairs == 0 { 0.0 } else { sum as f64 / pairs as f64 },
        pairs,
        component_nodes,
        total_nodes: n,
        connected: component_nodes == n,
        sources: sources.len(),
        sampled,
    })
}
