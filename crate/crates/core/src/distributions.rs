//! Net-size (NDV) and gate-pin (GDV) distributions.
//!
//! A [`SizeDistribution`] is a discrete PMF over positive integer sizes. The
//! net-size distribution of a netlist is the normalized histogram of net pin
//! counts; the gate-pin distribution is the normalized histogram of node
//! degrees (nets per node).
//!
//! Text format, one entry per line with sizes ascending:
//!
//! ```text
//! # comment
//! 2 0.55
//! 3 0.25
//! 4 0.2
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, RawNetlist};
use crate::rng::BenchRng;

const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u32, f64)>", into = "Vec<(u32, f64)>")]
pub struct SizeDistribution {
    entries: BTreeMap<u32, f64>,
    // Cumulative probabilities aligned with `entries`, for sampling.
    #[serde(skip)]
    cumulative: Vec<(u32, f64)>,
}

impl SizeDistribution {
    /// Validates sizes ≥ 1, probabilities in `[0, 1]`, and a total of 1
    /// within 1e-9. Zero-probability entries are kept as given.
    pub fn new(entries: impl IntoIterator<Item = (u32, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (s, p) in entries {
            if s == 0 {
                return Err(Error::InvalidDistribution("size 0 is not allowed".into()));
            }
            if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                return Err(Error::InvalidDistribution(format!(
                    "size {s} has probability {p} outside [0, 1]"
                )));
            }
            if map.insert(s, p).is_some() {
                return Err(Error::InvalidDistribution(format!("size {s} listed twice")));
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidDistribution("no entries".into()));
        }
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        let mut acc = 0.0;
        let cumulative = map
            .iter()
            .map(|(&s, &p)| {
                acc += p;
                (s, acc)
            })
            .collect();
        Ok(Self {
            entries: map,
            cumulative,
        })
    }

    /// Normalizes a histogram of `size -> count`.
    pub fn from_counts(counts: &BTreeMap<u32, u64>) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("empty histogram".into()));
        }
        Self::new(counts.iter().map(|(&s, &c)| (s, c as f64 / total as f64)))
    }

    pub fn from_samples(samples: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for s in samples {
            *counts.entry(s).or_insert(0u64) += 1;
        }
        Self::from_counts(&counts)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.entries.iter().map(|(&s, &p)| (s, p))
    }

    pub fn probability(&self, size: u32) -> f64 {
        self.entries.get(&size).copied().unwrap_or(0.0)
    }

    pub fn min_size(&self) -> u32 {
        *self.entries.keys().next().unwrap()
    }

    pub fn max_size(&self) -> u32 {
        *self.entries.keys().next_back().unwrap()
    }

    pub fn mean(&self) -> f64 {
        self.entries.iter().map(|(&s, &p)| s as f64 * p).sum()
    }

    /// Draws a size with probability `p_s`.
    ///
    /// One `unit_f64` draw `u`; returns the first size whose cumulative
    /// probability exceeds `u` (the largest positive-mass size if rounding
    /// leaves `u` past the final cumulative value).
    pub fn sample(&self, rng: &mut BenchRng) -> u32 {
        let u = rng.unit_f64();
        let idx = self.cumulative.partition_point(|&(_, c)| c <= u);
        match self.cumulative.get(idx) {
            Some(&(s, _)) => s,
            None => self
                .entries
                .iter()
                .rev()
                .find(|(_, &p)| p > 0.0)
                .map(|(&s, _)| s)
                .unwrap(),
        }
    }

    /// Parses the `size probability` text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut last: Option<u32> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(s), Some(p), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::parse(line_no, "expected `size probability`"));
            };
            let s: u32 = s
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid size `{s}`")))?;
            let p: f64 = p
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid probability `{p}`")))?;
            if last.is_some_and(|l| s <= l) {
                return Err(Error::parse(line_no, "sizes must be strictly ascending"));
            }
            last = Some(s);
            entries.push((s, p));
        }
        Self::new(entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, p) in self.entries() {
            writeln!(out, "{s} {p}").unwrap();
        }
        out
    }

    /// `size,probability` CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,probability\n");
        for (s, p) in self.entries() {
            writeln!(out, "{s},{p}").unwrap();
        }
        out
    }

    /// Small synthetic net-size distribution for demos. It is not derived from
    /// any real design.
    pub fn example_ndv() -> Self {
        Self::parse(include_str!("../data/example.ndv")).expect("bundled distribution is valid")
    }

    /// Synthetic gate-pin distribution paired with [`Self::example_ndv`].
    pub fn example_gdv() -> Self {
        Self::parse(include_str!("../data/example.gdv")).expect("bundled distribution is valid")
    }
}

impl TryFrom<Vec<(u32, f64)>> for SizeDistribution {
    type Error = Error;

    fn try_from(v: Vec<(u32, f64)>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SizeDistribution> for Vec<(u32, f64)> {
    fn from(d: SizeDistribution) -> Self {
        d.entries().collect()
    }
}

/// Convenience wrapper around [`SizeDistribution::sample`].
pub fn weighted_sample(dist: &SizeDistribution, rng: &mut BenchRng) -> u32 {
    dist.sample(rng)
}

/// `Σ_s |p_a(s) − p_b(s)|` over the union of supports.
pub fn l1_distance(a: &SizeDistribution, b: &SizeDistribution) -> f64 {
    let mut sizes: Vec<u32> = a.entries.keys().chain(b.entries.keys()).copied().collect();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
        .into_iter()
        .map(|s| (a.probability(s) - b.probability(s)).abs())
        .sum()
}

/// Net-size and gate-pin distributions of a clean netlist.
pub fn extract_distributions(hg: &Hypergraph) -> Result<(SizeDistribution, SizeDistribution)> {
    if let Some(v) = (0..hg.num_nodes()).find(|&v| hg.degree(v) == 0) {
        return Err(Error::Precondition(format!(
            "node {v} is not on any net; run cleanup first"
        )));
    }
    let ndv = SizeDistribution::from_samples(hg.nets().iter().map(|net| net.len() as u32))?;
    let gdv = SizeDistribution::from_samples((0..hg.num_nodes()).map(|v| hg.degree(v) as u32))?;
    Ok((ndv, gdv))
}

/// Removes repeated pins within a net, then nets with fewer than two pins,
/// then nodes left on no net. Surviving nodes are renumbered densely in their
/// original order; node weights follow their nodes.
pub fn cleanup_netlist(raw: &RawNetlist) -> Result<Hypergraph> {
    let n = raw.num_nodes();
    let mut nets = Vec::with_capacity(raw.nets.len());
    let mut stamp = vec![usize::MAX; n];
    for (e, net) in raw.nets.iter().enumerate() {
        let mut pins = Vec::with_capacity(net.len());
        for &v in net {
            if v >= n {
                return Err(Error::InvalidHypergraph(format!(
                    "net {e} references node {v}, but there are only {n} nodes"
                )));
            }
            if stamp[v] != e {
                stamp[v] = e;
                pins.push(v);
            }
        }
        if pins.len() >= 2 {
            nets.push(pins);
        }
    }
    let mut used = vec![false; n];
    for &v in nets.iter().flatten() {
        used[v] = true;
    }
    let mut remap = vec![usize::MAX; n];
    let mut weights = Vec::new();
    for v in 0..n {
        if used[v] {
            remap[v] = weights.len();
            weights.push(raw.node_weights[v]);
        }
    }
    if weights.is_empty() || nets.is_empty() {
        return Err(Error::EmptyDesign {
            nodes: weights.len(),
            nets: nets.len(),
        });
    }
    for net in &mut nets {
        for v in net.iter_mut() {
            *v = remap[*v];
        }
    }
    Hypergraph::with_weights(weights, nets)
}
