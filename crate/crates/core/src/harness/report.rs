//! Evaluation and statistics records.
//!
//! Reports serialize as pretty-printed JSON. An [`EvalReport`] looks like
//!
//! ```text
//! {
//!   "tool_version": "hgbench 0.1.0",
//!   "seed": 1,
//!   "params": { ... },
//!   "records": [
//!     { "graph_id": "g0", "partitioner": "fm", "k": 2, "hyperedge_cut": 12,
//!       "simple_ncut": { "model": "clique", "value": 0.031 },
//!       "balancedness": 0.5, "wall_time_ms": 1.7 }
//!   ],
//!   "aggregate": { "count": 1, "mean_hyperedge_cut": 12.0, ... }
//! }
//! ```
//!
//! Histograms for plotting are written as CSV with the header
//! `series,size,probability`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::distributions::SizeDistribution;
use crate::error::{Error, Result};
use crate::hypergraph::{
    avg_shortest_path, balancedness, hyperedge_cut, hypergraph_avg_path, simple_ncut, Hypergraph,
    PartitionAssignment, PathStats, WeightedGraph,
};
use crate::netmodel::{NetModel, NetModelKind};
use crate::TOOL_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggedNcut {
    pub model: NetModelKind,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub graph_id: String,
    pub partitioner: String,
    pub k: usize,
    pub hyperedge_cut: usize,
    pub simple_ncut: Option<TaggedNcut>,
    pub balancedness: f64,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub count: usize,
    pub mean_hyperedge_cut: f64,
    pub mean_balancedness: f64,
    pub mean_wall_time_ms: f64,
    /// Mean normalized cut per net model, over the records that carry one.
    pub mean_simple_ncut: BTreeMap<NetModelKind, f64>,
}

impl Aggregate {
    fn of(records: &[EvalRecord]) -> Self {
        let count = records.len();
        let mean = |f: &dyn Fn(&EvalRecord) -> f64| {
            if count == 0 {
                0.0
            } else {
                records.iter().map(f).sum::<f64>() / count as f64
            }
        };
        let mut ncut: BTreeMap<NetModelKind, (f64, usize)> = BTreeMap::new();
        for r in records {
            if let Some(t) = &r.simple_ncut {
                let e = ncut.entry(t.model).or_default();
                e.0 += t.value;
                e.1 += 1;
            }
        }
        Self {
            count,
            mean_hyperedge_cut: mean(&|r| r.hyperedge_cut as f64),
            mean_balancedness: mean(&|r| r.balancedness),
            mean_wall_time_ms: mean(&|r| r.wall_time_ms),
            mean_simple_ncut: ncut.into_iter().map(|(m, (s, c))| (m, s / c as f64)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub tool_version: String,
    pub seed: Option<u64>,
    pub params: serde_json::Value,
    pub records: Vec<EvalRecord>,
    pub aggregate: Aggregate,
}

impl EvalReport {
    pub fn new(seed: Option<u64>, params: serde_json::Value) -> Self {
        Self {
            tool_version: TOOL_VERSION.to_string(),
            seed,
            params,
            records: Vec::new(),
            aggregate: Aggregate::of(&[]),
        }
    }

    pub fn push(&mut self, record: EvalRecord) {
        self.records.push(record);
        self.recompute();
    }

    pub fn recompute(&mut self) {
        self.aggregate = Aggregate::of(&self.records);
    }

    /// Checks the stored aggregate against the records and every record's
    /// value ranges.
    pub fn verify(&self) -> Result<()> {
        for r in &self.records {
            if r.k == 0 || !(1.0 / r.k as f64 - 1e-12..=1.0 + 1e-12).contains(&r.balancedness) {
                return Err(Error::contract(format!(
                    "record {}: balancedness {} outside [1/{}, 1]",
                    r.graph_id, r.balancedness, r.k
                )));
            }
        }
        if Aggregate::of(&self.records) != self.aggregate {
            return Err(Error::contract("stored aggregate differs from the records"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// Cut, balance and, given a net model, normalized cut of `pa` on `hg`.
///
/// Star hubs inherit the part holding most of their net's pins (smallest
/// part id on ties).
pub fn evaluate(
    hg: &Hypergraph,
    pa: &PartitionAssignment,
    model: Option<&dyn NetModel>,
    graph_id: &str,
    partitioner: &str,
    wall_time_ms: f64,
) -> Result<EvalRecord> {
    pa.ensure_len(hg.num_nodes(), "hypergraph")?;
    let simple_ncut = match model {
        Some(m) => {
            let x = m.expand(hg);
            let full = if x.star_nodes.is_empty() {
                pa.clone()
            } else {
                PartitionAssignment::new(extend_to_hubs(hg, pa), pa.k())?
            };
            Some(TaggedNcut {
                model: x.model,
                value: simple_ncut(&x.graph, &full)?,
            })
        }
        None => None,
    };
    Ok(EvalRecord {
        graph_id: graph_id.to_string(),
        partitioner: partitioner.to_string(),
        k: pa.k(),
        hyperedge_cut: hyperedge_cut(hg, pa)?,
        simple_ncut,
        balancedness: balancedness(pa)?,
        wall_time_ms,
    })
}

fn extend_to_hubs(hg: &Hypergraph, pa: &PartitionAssignment) -> Vec<usize> {
    let mut parts = pa.parts().to_vec();
    let mut votes = vec![0usize; pa.k()];
    for net in hg.nets() {
        votes.iter_mut().for_each(|c| *c = 0);
        for &v in net {
            votes[pa.part(v)] += 1;
        }
        let best = (0..pa.k()).max_by_key(|&p| (votes[p], std::cmp::Reverse(p))).unwrap_or(0);
        parts.push(best);
    }
    parts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub tool_version: String,
    /// `hypergraph` or `graph`.
    pub kind: String,
    pub nodes: usize,
    /// Nets for hypergraphs, edges for graphs.
    pub edges: usize,
    /// `clique` for hypergraphs (nodes sharing a net are one hop apart), `graph` otherwise.
    pub path_semantics: String,
    pub path: PathStats,
    pub isolated_nodes: usize,
    pub ndv: Option<SizeDistribution>,
    /// Degree distribution over non-isolated nodes.
    pub gdv: Option<SizeDistribution>,
}

impl StatsReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// `series,size,probability` rows for the NDV and GDV histograms.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("series,size,probability\n");
        for (series, dist) in [("ndv", &self.ndv), ("gdv", &self.gdv)] {
            if let Some(d) = dist {
                for (s, p) in d.entries() {
                    out.push_str(&format!("{series},{s},{p}\n"));
                }
            }
        }
        out
    }
}

pub fn hypergraph_stats(hg: &Hypergraph, seed: u64) -> Result<StatsReport> {
    let degrees: Vec<u32> = (0..hg.num_nodes()).map(|v| hg.degree(v) as u32).collect();
    let isolated = degrees.iter().filter(|&&d| d == 0).count();
    let ndv = SizeDistribution::from_samples(hg.nets().iter().map(|net| net.len() as u32))?;
    let gdv = SizeDistribution::from_samples(degrees.into_iter().filter(|&d| d > 0)).ok();
    Ok(StatsReport {
        tool_version: TOOL_VERSION.to_string(),
        kind: "hypergraph".into(),
        nodes: hg.num_nodes(),
        edges: hg.num_nets(),
        path_semantics: "clique".into(),
        path: hypergraph_avg_path(hg, seed)?,
        isolated_nodes: isolated,
        ndv: Some(ndv),
        gdv,
    })
}

pub fn graph_stats(g: &WeightedGraph, seed: u64) -> Result<StatsReport> {
    let degrees: Vec<u32> = (0..g.num_nodes()).map(|v| g.neighbors(v).len() as u32).collect();
    let isolated = degrees.iter().filter(|&&d| d == 0).count();
    Ok(StatsReport {
        tool_version: TOOL_VERSION.to_string(),
        kind: "graph".into(),
        nodes: g.num_nodes(),
        edges: g.num_edges(),
        path_semantics: "graph".into(),
        path: avg_shortest_path(g, seed)?,
        isolated_nodes: isolated,
        ndv: None,
        gdv: SizeDistribution::from_samples(degrees.into_iter().filter(|&d| d > 0)).ok(),
    })
}
