//! Benchmark bundles: `<name>.hgr`, `<name>.planted.part`, `<name>.meta.json`
//! and, for refined bipartitions, `<name>.refined.part`.
//!
//! Loading recomputes the planted cut (and the refined cut when present) and
//! fails on any mismatch with the metadata.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::distributions::SizeDistribution;
use crate::error::{Error, Result};
use crate::generator::{CutSplit, GeneratedBenchmark, StopReason};
use crate::harness::hgr::{emit_hgr, parse_hgr};
use crate::harness::partfile::{read_partition, write_partition};
use crate::hypergraph::{hyperedge_cut, Hypergraph, PartitionAssignment};
use crate::TOOL_VERSION;

/// `per_part` for k > 2: every cut net was placed against a single budget,
/// so the planted cut bounds the k-way cut only as reported here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetScope {
    Bipartition,
    PerPart,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleMeta {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub rent_t: f64,
    pub rent_p: f64,
    pub ndv: SizeDistribution,
    pub gdv: SizeDistribution,
    pub budget: usize,
    pub planted_cut: usize,
    pub refined_cut: Option<usize>,
    pub net_count: usize,
    pub skipped_nets: usize,
    pub tool_version: String,
    pub cut_split: CutSplit,
    pub stop_reason: StopReason,
    pub budget_scope: BudgetScope,
}

impl BundleMeta {
    pub fn from_benchmark(b: &GeneratedBenchmark) -> Self {
        let p = &b.params;
        Self {
            seed: p.seed,
            n: p.n,
            k: p.k,
            rent_t: p.rent_t,
            rent_p: p.rent_p,
            ndv: p.ndv.clone(),
            gdv: p.gdv.clone(),
            budget: b.budget,
            planted_cut: b.planted_cut,
            refined_cut: b.refined_cut,
            net_count: b.hypergraph.num_nets(),
            skipped_nets: b.stats.skipped_nets,
            tool_version: TOOL_VERSION.to_string(),
            cut_split: p.cut_split,
            stop_reason: b.stats.stop_reason,
            budget_scope: if p.k == 2 {
                BudgetScope::Bipartition
            } else {
                BudgetScope::PerPart
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundlePaths {
    pub hgr: PathBuf,
    pub planted_part: PathBuf,
    pub refined_part: PathBuf,
    pub meta: PathBuf,
}

impl BundlePaths {
    pub fn new(dir: &Path, name: &str) -> Self {
        Self {
            hgr: dir.join(format!("{name}.hgr")),
            planted_part: dir.join(format!("{name}.planted.part")),
            refined_part: dir.join(format!("{name}.refined.part")),
            meta: dir.join(format!("{name}.meta.json")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Bundle {
    pub paths: BundlePaths,
    pub hypergraph: Hypergraph,
    pub planted: PartitionAssignment,
    pub refined: Option<PartitionAssignment>,
    pub meta: BundleMeta,
}

pub fn write_bundle(dir: &Path, name: &str, b: &GeneratedBenchmark) -> Result<BundlePaths> {
    std::fs::create_dir_all(dir)?;
    let paths = BundlePaths::new(dir, name);
    std::fs::write(&paths.hgr, emit_hgr(&b.hypergraph)?)?;
    write_partition(&b.planted, &paths.planted_part)?;
    if let Some(refined) = &b.refined {
        write_partition(refined, &paths.refined_part)?;
    }
    let meta = serde_json::to_string_pretty(&BundleMeta::from_benchmark(b))?;
    std::fs::write(&paths.meta, meta + "\n")?;
    Ok(paths)
}

pub fn load_bundle(dir: &Path, name: &str) -> Result<Bundle> {
    let paths = BundlePaths::new(dir, name);
    let meta: BundleMeta = serde_json::from_str(&std::fs::read_to_string(&paths.meta)?)?;
    let hypergraph = parse_hgr(&std::fs::read_to_string(&paths.hgr)?)?;
    let bad = |msg: String| Error::InconsistentBundle {
        path: paths.meta.clone(),
        msg,
    };

    let planted = read_partition(&paths.planted_part)?.assignment;
    if planted.len() != hypergraph.num_nodes() {
        return Err(bad(format!(
            "planted partition has {} entries, hypergraph has {} nodes",
            planted.len(),
            hypergraph.num_nodes()
        )));
    }
    if hypergraph.num_nodes() != meta.n || hypergraph.num_nets() != meta.net_count {
        return Err(bad(format!(
            "meta declares n = {}, nets = {}; files hold n = {}, nets = {}",
            meta.n,
            meta.net_count,
            hypergraph.num_nodes(),
            hypergraph.num_nets()
        )));
    }
    let cut = hyperedge_cut(&hypergraph, &planted)?;
    if cut != meta.planted_cut {
        return Err(bad(format!("planted_cut is {} but the files give {cut}", meta.planted_cut)));
    }

    let refined = match meta.refined_cut {
        Some(expected) => {
            let pa = read_partition(&paths.refined_part)?.assignment;
            pa.ensure_len(hypergraph.num_nodes(), "hypergraph")?;
            let cut = hyperedge_cut(&hypergraph, &pa)?;
            if cut != expected {
                return Err(bad(format!("refined_cut is {expected} but the files give {cut}")));
            }
            Some(pa)
        }
        None => None,
    };

    Ok(Bundle {
        paths,
        hypergraph,
        planted,
        refined,
        meta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{generate_planted, GeneratorParams};

    fn small() -> GeneratedBenchmark {
        let params = GeneratorParams::new(
            400,
            2,
            SizeDistribution::example_ndv(),
            SizeDistribution::example_gdv(),
        )
        .with_seed(3);
        generate_planted(&params).unwrap()
    }

    #[test]
    fn write_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let b = small();
        write_bundle(dir.path(), "b", &b).unwrap();
        let loaded = load_bundle(dir.path(), "b").unwrap();
        assert_eq!(loaded.hypergraph, b.hypergraph);
        assert_eq!(loaded.planted, b.planted);
        assert_eq!(loaded.refined, b.refined);
        assert_eq!(loaded.meta.planted_cut, b.planted_cut);
        assert_eq!(loaded.meta.tool_version, TOOL_VERSION);
        assert_eq!(loaded.meta.budget_scope, BudgetScope::Bipartition);
    }

    #[test]
    fn tampered_meta_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let b = small();
        let paths = write_bundle(dir.path(), "b", &b).unwrap();
        let mut meta: BundleMeta =
            serde_json::from_str(&std::fs::read_to_string(&paths.meta).unwrap()).unwrap();
        meta.planted_cut += 1;
        std::fs::write(&paths.meta, serde_json::to_string(&meta).unwrap()).unwrap();
        assert!(matches!(
            load_bundle(dir.path(), "b"),
            Err(Error::InconsistentBundle { .. })
        ));
    }

    #[test]
    fn meta_keys() {
        let v = serde_json::to_value(BundleMeta::from_benchmark(&small())).unwrap();
        for key in [
            "seed", "n", "k", "rent_t", "rent_p", "ndv", "gdv", "budget", "planted_cut",
            "refined_cut", "net_count", "skipped_nets", "tool_version",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
