//! Hypergraph to simple-graph expansions.
//!
//! | model    | edges per net of size `s`      | weight          | extra nodes |
//! |----------|--------------------------------|-----------------|-------------|
//! | `clique` | all `s(s-1)/2` pairs           | `2 / (s(s-1))`  | none        |
//! | `star`   | `s` spokes to a new hub        | `1`             | one per net, weight 0 |
//! | `fanout` | driver (first pin) to each sink | `1 / (s-1)`    | none        |
//!
//! Clique and fanout conserve one unit of edge weight per net. Edges produced
//! by different nets on the same pair are merged by summing.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetModelKind {
    Clique,
    Star,
    Fanout,
}

impl fmt::Display for NetModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NetModelKind::Clique => "clique",
            NetModelKind::Star => "star",
            NetModelKind::Fanout => "fanout",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedGraph {
    pub graph: WeightedGraph,
    pub num_original_nodes: usize,
    /// Hub nodes added by the star model, `num_original_nodes..`.
    pub star_nodes: Vec<usize>,
    pub model: NetModelKind,
}

pub trait NetModel: Send + Sync {
    fn name(&self) -> &'static str;
    fn kind(&self) -> NetModelKind;
    fn expand(&self, hg: &Hypergraph) -> ExpandedGraph;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Clique;

#[derive(Debug, Clone, Copy, Default)]
pub struct Star;

#[derive(Debug, Clone, Copy, Default)]
pub struct Fanout;

impl NetModel for Clique {
    fn name(&self) -> &'static str {
        "clique"
    }

    fn kind(&self) -> NetModelKind {
        NetModelKind::Clique
    }

    fn expand(&self, hg: &Hypergraph) -> ExpandedGraph {
        let edges = hg.nets().iter().flat_map(|net| {
            let s = net.len() as f64;
            let w = 2.0 / (s * (s - 1.0));
            net.iter()
                .enumerate()
                .flat_map(move |(i, &u)| net[i + 1..].iter().map(move |&v| (u, v, w)))
        });
        finish(hg, hg.node_weights().to_vec(), edges, Vec::new(), self.kind())
    }
}

impl NetModel for Star {
    fn name(&self) -> &'static str {
        "star"
    }

    fn kind(&self) -> NetModelKind {
        NetModelKind::Star
    }

    fn expand(&self, hg: &Hypergraph) -> ExpandedGraph {
        let n = hg.num_nodes();
        let mut weights = hg.node_weights().to_vec();
        weights.resize(n + hg.num_nets(), 0);
        let edges = hg
            .nets()
            .iter()
            .enumerate()
            .flat_map(move |(e, net)| net.iter().map(move |&v| (n + e, v, 1.0)));
        let star_nodes = (n..n + hg.num_nets()).collect();
        finish(hg, weights, edges, star_nodes, self.kind())
    }
}

impl NetModel for Fanout {
    fn name(&self) -> &'static str {
        "fanout"
    }

    fn kind(&self) -> NetModelKind {
        NetModelKind::Fanout
    }

    fn expand(&self, hg: &Hypergraph) -> ExpandedGraph {
        let edges = hg.nets().iter().flat_map(|net| {
            let w = 1.0 / (net.len() - 1) as f64;
            let driver = net[0];
            net[1..].iter().map(move |&sink| (driver, sink, w))
        });
        finish(hg, hg.node_weights().to_vec(), edges, Vec::new(), self.kind())
    }
}

fn finish(
    hg: &Hypergraph,
    weights: Vec<u32>,
    edges: impl IntoIterator<Item = (usize, usize, f64)>,
    star_nodes: Vec<usize>,
    model: NetModelKind,
) -> ExpandedGraph {
    // Inputs come from a validated hypergraph, so edges are in range, loop-free
    // and positive.
    let graph = WeightedGraph::with_weights(weights, edges).expect("expansion of a valid hypergraph");
    ExpandedGraph {
        graph,
        num_original_nodes: hg.num_nodes(),
        star_nodes,
        model,
    }
}

type NetModelFactory = fn() -> Box<dyn NetModel>;

/// Name-keyed set of net models.
pub struct NetModelRegistry {
    factories: BTreeMap<&'static str, NetModelFactory>,
}

impl Default for NetModelRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl NetModelRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register("clique", || Box::new(Clique));
        r.register("star", || Box::new(Star));
        r.register("fanout", || Box::new(Fanout));
        r
    }

    pub fn register(&mut self, name: &'static str, factory: NetModelFactory) {
        self.factories.insert(name, factory);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.keys().copied().collect()
    }

    pub fn create(&self, name: &str) -> Result<Box<dyn NetModel>> {
        self.factories
            .get(name)
            .map(|f| f())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "net model",
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }
}

/// Looks up a built-in net model by name.
pub fn net_model(name: &str) -> Result<Box<dyn NetModel>> {
    NetModelRegistry::with_builtins().create(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: usize, nets: Vec<Vec<usize>>) -> Hypergraph {
        Hypergraph::new(n, nets).unwrap()
    }

    #[test]
    fn clique_weights() {
        let x = Clique.expand(&hg(3, vec![vec![0, 1, 2]]));
        assert_eq!(x.graph.num_edges(), 3);
        for &(_, _, w) in x.graph.edges() {
            assert!((w - 1.0 / 3.0).abs() < 1e-15);
        }
        assert!((x.graph.total_edge_weight() - 1.0).abs() < 1e-12);

        let x = Clique.expand(&hg(2, vec![vec![0, 1]]));
        assert_eq!(x.graph.edges(), &[(0, 1, 1.0)]);

        let x = Clique.expand(&hg(4, vec![vec![0, 1, 2, 3]]));
        assert_eq!(x.graph.num_edges(), 6);
        assert!(x.graph.edges().iter().all(|e| (e.2 - 1.0 / 6.0).abs() < 1e-15));
    }

    #[test]
    fn star_shape() {
        let h = hg(9, vec![vec![0, 1], vec![2, 3, 4], vec![5, 6, 7, 8]]);
        let x = Star.expand(&h);
        assert_eq!(x.graph.num_nodes(), 12);
        assert_eq!(x.graph.num_edges(), 9);
        assert_eq!(x.star_nodes, vec![9, 10, 11]);
        assert!(x.graph.node_weights()[..9].iter().all(|&w| w == 1));
        assert!(x.graph.node_weights()[9..].iter().all(|&w| w == 0));

        let x = Star.expand(&hg(2, vec![vec![0, 1]]));
        assert_eq!(x.graph.num_nodes(), 3);
        assert_eq!(x.graph.edges(), &[(0, 2, 1.0), (1, 2, 1.0)]);
    }

    #[test]
    fn star_keeps_node_weights() {
        let h = Hypergraph::with_weights(vec![3, 4], vec![vec![0, 1]]).unwrap();
        assert_eq!(Star.expand(&h).graph.node_weights(), &[3, 4, 0]);
    }

    #[test]
    fn fanout_driver_edges() {
        let x = Fanout.expand(&hg(4, vec![vec![2, 0, 1, 3]]));
        let third = 1.0 / 3.0;
        assert_eq!(x.graph.edges(), &[(0, 2, third), (1, 2, third), (2, 3, third)]);

        let pair = hg(2, vec![vec![1, 0]]);
        assert_eq!(Fanout.expand(&pair).graph, Clique.expand(&pair).graph);

        let x = Fanout.expand(&hg(2, vec![vec![0, 1], vec![0, 1]]));
        assert_eq!(x.graph.edges(), &[(0, 1, 2.0)]);
    }

    #[test]
    fn registry_lookup() {
        let r = NetModelRegistry::with_builtins();
        assert_eq!(r.names(), vec!["clique", "fanout", "star"]);
        assert_eq!(r.create("star").unwrap().kind(), NetModelKind::Star);
        let err = r.create("bogus").err().unwrap();
        assert!(err.to_string().contains("clique, fanout, star"));
    }
}
