//! Hypergraph partitioning benchmark toolkit.
//!
//! The crate is organised around a handful of pieces that can be mixed freely:
//!
//! - [`hypergraph`]: the netlist and weighted-graph data model, partition
//!   assignments, and the discrete quality metrics (hyperedge cut, normalized
//!   cut, volume, balancedness) plus path statistics.
//! - [`distributions`]: net-size and gate-pin distributions, extraction from
//!   existing netlists, and netlist cleanup.
//! - [`generator`]: planted-partition netlist generation driven by Rent's rule,
//!   and Erdős–Rényi comparison graphs.
//! - [`netmodel`]: clique, star and fanout expansions, selectable by name.
//! - [`partition`]: partitioners (FM, brute force, soft normalized cut,
//!   external tools) behind a common trait and a name-keyed registry.
//! - [`softcut`]: the differentiable normalized-cut objective and its
//!   gradient-descent optimizer.
//! - [`harness`]: file formats, benchmark bundles, evaluation and reports.

pub mod distributions;
pub mod error;
pub mod generator;
pub mod harness;
pub mod hypergraph;
pub mod netmodel;
pub mod partition;
pub mod rng;
pub mod softcut;

pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, PartitionAssignment, RawNetlist, WeightedGraph};

/// Version string embedded in bundles and reports.
pub const TOOL_VERSION: &str = concat!("hgbench ", env!("CARGO_PKG_VERSION"));
