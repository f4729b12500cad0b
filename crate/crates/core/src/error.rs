use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("netlist is empty after cleanup ({nodes} nodes, {nets} nets)")]
    EmptyDesign { nodes: usize, nets: usize },

    #[error("partition {part} has zero volume; normalized cut is undefined")]
    DegeneratePartition { part: usize },

    #[error("node {node} has zero degree; soft normalized cut is undefined")]
    ZeroDegreeNode { node: usize },

    #[error("partition {part} collapsed (expected volume {volume:e} below 1e-12)")]
    CollapsedPartition { part: usize, volume: f64 },

    #[error("optimizer diverged at epoch {epoch} (loss = {loss})")]
    Divergence { epoch: usize, loss: f64 },

    #[error("generation failed: {0}")]
    GenerationFailed(String),

    #[error("initial partition is unbalanced: largest side {largest} exceeds bound {bound}")]
    Unbalanced { largest: usize, bound: usize },

    #[error("unsupported part count k = {0}; only bipartitioning is supported")]
    UnsupportedK(usize),

    #[error("instance too large for exhaustive search: {k}^{n} assignments exceeds 2^24")]
    TooLarge { n: usize, k: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("external partitioner not found: {0}")]
    ExternalNotFound(String),

    #[error("external partitioner failed: {msg}\n--- stdout ---\n{stdout}\n--- stderr ---\n{stderr}")]
    ExternalFailed {
        msg: String,
        stdout: String,
        stderr: String,
    },

    #[error("bundle {path} is inconsistent: {msg}")]
    InconsistentBundle { path: PathBuf, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
