//! Synthetic netlists with a planted partition and a Rent's-rule cut budget.
//!
//! Generation outline:
//!
//! 1. Shuffle-split the `n` nodes into `k` near-equal parts (the planted
//!    partition).
//! 2. Draw a pin limit for every node from the gate-pin distribution.
//! 3. Compute the cut budget `round(t · (n/k)^p)`.
//! 4. Repeatedly draw a net size from the net-size distribution. While fewer
//!    than `budget` nets exist, part of the net is placed in one randomly
//!    chosen part and the rest in the union of the others; afterwards every
//!    net lies inside a single part. Pins are drawn only from nodes still
//!    below their pin limit. A net that cannot be filled is skipped.
//! 5. Stop once fewer than two nodes have free pins or `retry_limit`
//!    consecutive nets were skipped.
//! 6. For bipartitions, optionally refine the planted split with FM.

use serde::{Deserialize, Serialize};

use crate::distributions::SizeDistribution;
use crate::error::{Error, Result};
use crate::hypergraph::{hyperedge_cut, Hypergraph, PartitionAssignment, WeightedGraph};
use crate::partition::{fm_bipartition, random_balanced_partition, FmConfig};
use crate::rng::{derive_seed, BenchRng};

/// How many pins of a budget-phase net stay in the chosen part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutSplit {
    /// Uniform in `1..=size - 1`: every budget-phase net is cut.
    #[default]
    Strict,
    /// Uniform in `1..=size`: a budget-phase net stays uncut with probability `1/size`.
    Inclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub n: usize,
    pub k: usize,
    pub ndv: SizeDistribution,
    pub gdv: SizeDistribution,
    pub rent_t: f64,
    pub rent_p: f64,
    pub seed: u64,
    /// Run FM on the planted split (bipartitions only).
    pub refine: bool,
    /// Consecutive skipped nets that end generation.
    pub retry_limit: usize,
    pub cut_split: CutSplit,
}

impl GeneratorParams {
    pub const DEFAULT_RENT_T: f64 = 4.0;
    pub const DEFAULT_RENT_P: f64 = 0.665;
    pub const DEFAULT_RETRY_LIMIT: usize = 100;

    pub fn new(n: usize, k: usize, ndv: SizeDistribution, gdv: SizeDistribution) -> Self {
        Self {
            n,
            k,
            ndv,
            gdv,
            rent_t: Self::DEFAULT_RENT_T,
            rent_p: Self::DEFAULT_RENT_P,
            seed: 0,
            refine: true,
            retry_limit: Self::DEFAULT_RETRY_LIMIT,
            cut_split: CutSplit::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 || self.n < self.k {
            return Err(Error::contract(format!(
                "need n >= k >= 2, got n = {}, k = {}",
                self.n, self.k
            )));
        }
        if !(self.rent_t > 0.0) || !(self.rent_p > 0.0 && self.rent_p < 1.0) {
            return Err(Error::contract(format!(
                "Rent parameters out of range: t = {}, p = {}",
                self.rent_t, self.rent_p
            )));
        }
        if self.retry_limit == 0 {
            return Err(Error::contract("retry_limit must be at least 1"));
        }
        if self.ndv.min_size() < 2 {
            return Err(Error::InvalidDistribution(format!(
                "net sizes must be at least 2, found {}",
                self.ndv.min_size()
            )));
        }
        // Rough feasibility: the expected pin supply must cover at least one
        // net of the smallest size.
        let supply = self.n as f64 * self.gdv.mean();
        if supply < self.ndv.min_size() as f64 {
            return Err(Error::GenerationFailed(format!(
                "expected pin supply {supply:.1} cannot fill a single net of size {}",
                self.ndv.min_size()
            )));
        }
        Ok(())
    }
}

/// `round(t · (n/k)^p)`.
pub fn rent_cut_budget(n: usize, k: usize, t: f64, p: f64) -> Result<usize> {
    if k == 0 || n < k || !(t > 0.0) || !(p > 0.0 && p < 1.0) {
        return Err(Error::contract(format!(
            "invalid Rent budget inputs: n = {n}, k = {k}, t = {t}, p = {p}"
        )));
    }
    Ok((t * (n as f64 / k as f64).powf(p)).round() as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Fewer than two nodes had free pins.
    PinsExhausted,
    /// `retry_limit` consecutive nets could not be placed.
    RetryLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub skipped_nets: usize,
    pub stop_reason: StopReason,
    /// Nets created while the budget phase was active.
    pub budget_phase_nets: usize,
    pub unused_pins: usize,
}

#[derive(Debug, Clone)]
pub struct GeneratedBenchmark {
    pub hypergraph: Hypergraph,
    pub planted: PartitionAssignment,
    pub planted_cut: usize,
    pub refined: Option<PartitionAssignment>,
    pub refined_cut: Option<usize>,
    pub budget: usize,
    /// Pin limit drawn for every node.
    pub max_degrees: Vec<u32>,
    pub stats: GenerationStats,
    pub params: GeneratorParams,
}

impl GeneratedBenchmark {
    /// Best known partition: the refined one when present, else the planted one.
    pub fn known_partition(&self) -> (&PartitionAssignment, usize) {
        match (&self.refined, self.refined_cut) {
            (Some(pa), Some(cut)) => (pa, cut),
            _ => (&self.planted, self.planted_cut),
        }
    }
}

/// Nodes with free pins, bucketed by planted part, with O(1) removal.
struct FreePool {
    by_part: Vec<Vec<usize>>,
    slot: Vec<usize>,
    total: usize,
}

impl FreePool {
    fn new(planted: &PartitionAssignment) -> Self {
        let mut by_part = vec![Vec::new(); planted.k()];
        let mut slot = vec![0; planted.len()];
        for (v, &p) in planted.parts().iter().enumerate() {
            slot[v] = by_part[p].len();
            by_part[p].push(v);
        }
        Self {
            by_part,
            slot,
            total: planted.len(),
        }
    }

    fn remove(&mut self, v: usize, part: usize) {
        let list = &mut self.by_part[part];
        let i = self.slot[v];
        list.swap_remove(i);
        if let Some(&moved) = list.get(i) {
            self.slot[moved] = i;
        }
        self.total -= 1;
    }

    /// `count` distinct free nodes from the parts other than `part`, drawn
    /// uniformly from their union.
    fn sample_outside(&self, part: usize, count: usize, rng: &mut BenchRng) -> Option<Vec<usize>> {
        let outside = self.total - self.by_part[part].len();
        let picks = rng.sample_indices(outside, count)?;
        Some(
            picks
                .into_iter()
                .map(|mut i| {
                    for (p, list) in self.by_part.iter().enumerate() {
                        if p == part {
                            continue;
                        }
                        if i < list.len() {
                            return list[i];
                        }
                        i -= list.len();
                    }
                    unreachable!("index within the union of other parts")
                })
                .collect(),
        )
    }
}

pub fn generate_planted(params: &GeneratorParams) -> Result<GeneratedBenchmark> {
    params.validate()?;
    let (n, k) = (params.n, params.k);
    let mut rng = BenchRng::seed_from_u64(params.seed);

    let planted = random_balanced_partition(n, k, &mut rng)?;
    let max_degrees: Vec<u32> = (0..n).map(|_| params.gdv.sample(&mut rng)).collect();
    let budget = rent_cut_budget(n, k, params.rent_t, params.rent_p)?;

    let mut degree = vec![0u32; n];
    let mut pool = FreePool::new(&planted);
    let mut nets: Vec<Vec<usize>> = Vec::new();
    let mut skipped = 0;
    let mut consecutive = 0;
    let mut budget_phase_nets = 0;

    let stop_reason = loop {
        if pool.total < 2 {
            break StopReason::PinsExhausted;
        }
        if consecutive >= params.retry_limit {
            break StopReason::RetryLimit;
        }
        let size = params.ndv.sample(&mut rng) as usize;
        let in_budget = nets.len() < budget;
        let inside = if in_budget {
            match params.cut_split {
                CutSplit::Strict => 1 + rng.below(size - 1),
                CutSplit::Inclusive => 1 + rng.below(size),
            }
        } else {
            size
        };
        let part = rng.below(k);

        let local = &pool.by_part[part];
        let Some(picks) = rng.sample_indices(local.len(), inside) else {
            skipped += 1;
            consecutive += 1;
            continue;
        };
        let mut net: Vec<usize> = picks.into_iter().map(|i| local[i]).collect();
        let Some(cut_nodes) = pool.sample_outside(part, size - inside, &mut rng) else {
            skipped += 1;
            consecutive += 1;
            continue;
        };
        net.extend(cut_nodes);
        consecutive = 0;
        if in_budget {
            budget_phase_nets += 1;
        }
        for &v in &net {
            degree[v] += 1;
            if degree[v] >= max_degrees[v] {
                pool.remove(v, planted.part(v));
            }
        }
        nets.push(net);
    };

    if nets.is_empty() {
        return Err(Error::GenerationFailed(format!(
            "no net could be placed (n = {n}, k = {k}, {skipped} attempts, net sizes {}..={}, mean pin limit {:.2})",
            params.ndv.min_size(),
            params.ndv.max_size(),
            params.gdv.mean()
        )));
    }
    let unused_pins = (0..n)
        .map(|v| (max_degrees[v] - degree[v].min(max_degrees[v])) as usize)
        .sum();
    let hypergraph = Hypergraph::new(n, nets)?;
    let planted_cut = hyperedge_cut(&hypergraph, &planted)?;

    let (refined, refined_cut) = if params.refine && k == 2 {
        let cfg = FmConfig {
            seed: derive_seed(params.seed, u64::MAX),
            ..FmConfig::default()
        };
        let (pa, cut) = fm_bipartition(&hypergraph, &planted, &cfg)?;
        (Some(pa), Some(cut))
    } else {
        (None, None)
    };

    Ok(GeneratedBenchmark {
        hypergraph,
        planted,
        planted_cut,
        refined,
        refined_cut,
        budget,
        max_degrees,
        stats: GenerationStats {
            skipped_nets: skipped,
            stop_reason,
            budget_phase_nets,
            unused_pins,
        },
        params: params.clone(),
    })
}

/// G(n, p) with unit weights. Pairs `(u, v)`, `u < v`, are visited in
/// lexicographic order with one `unit_f64` draw each.
pub fn generate_erdos_renyi(n: usize, p_edge: f64, seed: u64) -> Result<WeightedGraph> {
    if !(0.0..=1.0).contains(&p_edge) {
        return Err(Error::contract(format!("edge probability {p_edge} outside [0, 1]")));
    }
    let mut rng = BenchRng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.unit_f64() < p_edge {
                edges.push((u, v, 1.0));
            }
        }
    }
    WeightedGraph::from_edges(n, edges)
}
