//! Partitioners behind a common trait, selectable by name.
//!
//! | name       | algorithm                                               |
//! |------------|---------------------------------------------------------|
//! | `random`   | seeded balanced shuffle-split                           |
//! | `fm`       | Fiduccia–Mattheyses bipartition refinement              |
//! | `brute`    | exhaustive minimum cut (tiny instances only)            |
//! | `softcut`  | soft normalized-cut descent on a net-model expansion    |
//! | `external` | external hMETIS-style binary                            |

mod brute;
pub mod fm;

use std::collections::BTreeMap;

pub use brute::{brute_force_min_cut, BRUTE_FORCE_LIMIT};
pub use fm::{balance_bounds, fm_bipartition, FmConfig, FmState};

use crate::error::{Error, Result};
use crate::harness::external::{run_external_partitioner, ExternalCommand};
use crate::harness::hgr::emit_hgr;
use crate::hypergraph::{Hypergraph, PartitionAssignment};
use crate::netmodel::NetModelRegistry;
use crate::rng::BenchRng;
use crate::softcut::{harden, optimize_soft, SoftcutConfig};

/// Seeded shuffle of `0..n` split into `k` contiguous chunks; the first
/// `n mod k` chunks get one extra node.
pub fn random_balanced_partition(
    n: usize,
    k: usize,
    rng: &mut BenchRng,
) -> Result<PartitionAssignment> {
    if k == 0 || n < k {
        return Err(Error::contract(format!("cannot split {n} nodes into {k} parts")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let (base, extra) = (n / k, n % k);
    let mut parts = vec![0; n];
    let mut pos = 0;
    for p in 0..k {
        let len = base + usize::from(p < extra);
        for &v in &order[pos..pos + len] {
            parts[v] = p;
        }
        pos += len;
    }
    PartitionAssignment::new(parts, k)
}

pub trait Partitioner: Send + Sync {
    fn name(&self) -> &'static str;
    fn partition(&self, hg: &Hypergraph, k: usize) -> Result<PartitionAssignment>;
}

/// Settings shared by the registry's factories. Each partitioner reads the
/// fields it cares about.
#[derive(Debug, Clone)]
pub struct PartitionerOptions {
    pub seed: u64,
    pub epsilon: f64,
    pub restarts: usize,
    pub max_passes: usize,
    /// Starting point for FM; a random balanced split is used when absent.
    pub initial: Option<PartitionAssignment>,
    pub net_model: String,
    pub softcut: SoftcutConfig,
    pub external: ExternalCommand,
}

impl Default for PartitionerOptions {
    fn default() -> Self {
        let fm = FmConfig::default();
        Self {
            seed: 0,
            epsilon: fm.epsilon,
            restarts: fm.restarts,
            max_passes: fm.max_passes,
            initial: None,
            net_model: "clique".into(),
            softcut: SoftcutConfig::default(),
            external: ExternalCommand::default(),
        }
    }
}

impl PartitionerOptions {
    pub fn fm_config(&self) -> FmConfig {
        FmConfig {
            epsilon: self.epsilon,
            max_passes: self.max_passes,
            restarts: self.restarts,
            seed: self.seed,
        }
    }
}

pub type PartitionerFactory = fn(&PartitionerOptions) -> Result<Box<dyn Partitioner>>;

pub struct PartitionerRegistry {
    factories: BTreeMap<&'static str, PartitionerFactory>,
}

impl Default for PartitionerRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl PartitionerRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register("random", |o| Ok(Box::new(RandomPartitioner { seed: o.seed })));
        r.register("fm", |o| {
            let cfg = o.fm_config();
            cfg.validate()?;
            Ok(Box::new(FmPartitioner {
                cfg,
                initial: o.initial.clone(),
            }))
        });
        r.register("brute", |o| Ok(Box::new(BruteForcePartitioner { epsilon: o.epsilon })));
        r.register("softcut", |o| {
            o.softcut.validate()?;
            // Fail on unknown models at construction, not at first use.
            NetModelRegistry::with_builtins().create(&o.net_model)?;
            Ok(Box::new(SoftcutPartitioner {
                net_model: o.net_model.clone(),
                cfg: SoftcutConfig {
                    seed: o.seed,
                    ..o.softcut.clone()
                },
            }))
        });
        r.register("external", |o| {
            Ok(Box::new(ExternalPartitioner {
                cmd: o.external.clone(),
                ub_factor: (o.epsilon * 100.0).round() as u32,
            }))
        });
        r
    }

    pub fn register(&mut self, name: &'static str, factory: PartitionerFactory) {
        self.factories.insert(name, factory);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.keys().copied().collect()
    }

    pub fn create(&self, name: &str, opts: &PartitionerOptions) -> Result<Box<dyn Partitioner>> {
        let factory = self.factories.get(name).ok_or_else(|| Error::UnknownStrategy {
            kind: "partitioner",
            name: name.to_string(),
            available: self.names().join(", "),
        })?;
        factory(opts)
    }
}

pub struct RandomPartitioner {
    pub seed: u64,
}

impl Partitioner for RandomPartitioner {
    fn name(&self) -> &'static str {
        "random"
    }

    fn partition(&self, hg: &Hypergraph, k: usize) -> Result<PartitionAssignment> {
        random_balanced_partition(hg.num_nodes(), k, &mut BenchRng::seed_from_u64(self.seed))
    }
}

pub struct FmPartitioner {
    pub cfg: FmConfig,
    pub initial: Option<PartitionAssignment>,
}

impl Partitioner for FmPartitioner {
    fn name(&self) -> &'static str {
        "fm"
    }

    fn partition(&self, hg: &Hypergraph, k: usize) -> Result<PartitionAssignment> {
        if k != 2 {
            return Err(Error::UnsupportedK(k));
        }
        let initial = match &self.initial {
            Some(pa) => pa.clone(),
            None => random_balanced_partition(
                hg.num_nodes(),
                2,
                &mut BenchRng::seed_from_u64(self.cfg.seed),
            )?,
        };
        Ok(fm_bipartition(hg, &initial, &self.cfg)?.0)
    }
}

pub struct BruteForcePartitioner {
    pub epsilon: f64,
}

impl Partitioner for BruteForcePartitioner {
    fn name(&self) -> &'static str {
        "brute"
    }

    fn partition(&self, hg: &Hypergraph, k: usize) -> Result<PartitionAssignment> {
        Ok(brute_force_min_cut(hg, k, self.epsilon)?.0)
    }
}

/// Expands the hypergraph with a net model, optimizes the soft normalized
/// cut, and hardens by argmax. Auxiliary star nodes are dropped from the
/// returned assignment.
pub struct SoftcutPartitioner {
    pub net_model: String,
    pub cfg: SoftcutConfig,
}

impl Partitioner for SoftcutPartitioner {
    fn name(&self) -> &'static str {
        "softcut"
    }

    fn partition(&self, hg: &Hypergraph, k: usize) -> Result<PartitionAssignment> {
        let model = NetModelRegistry::with_builtins().create(&self.net_model)?;
        let expanded = model.expand(hg);
        let out = optimize_soft(&expanded.graph, k, &self.cfg)?;
        Ok(harden(&out.assignment).truncated(expanded.num_original_nodes))
    }
}

/// Writes the hypergraph to a scratch `.hgr` and runs an external binary on it.
pub struct ExternalPartitioner {
    pub cmd: ExternalCommand,
    pub ub_factor: u32,
}

impl Partitioner for ExternalPartitioner {
    fn name(&self) -> &'static str {
        "external"
    }

    fn partition(&self, hg: &Hypergraph, k: usize) -> Result<PartitionAssignment> {
        let dir = std::env::temp_dir().join(format!(
            "hgbench-ext-{}-{}",
            std::process::id(),
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_nanos())
        ));
        std::fs::create_dir_all(&dir)?;
        let path = dir.join("input.hgr");
        let result = emit_hgr(hg)
            .and_then(|text| Ok(std::fs::write(&path, text)?))
            .and_then(|_| run_external_partitioner(&path, k, self.ub_factor, &self.cmd));
        let _ = std::fs::remove_dir_all(&dir);
        let run = result?;
        run.assignment.ensure_len(hg.num_nodes(), "hypergraph")?;
        Ok(run.assignment)
    }
}
