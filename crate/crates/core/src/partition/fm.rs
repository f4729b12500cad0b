//! Fiduccia–Mattheyses bipartition refinement on the hypergraph.
//!
//! Gains come straight from per-net side counts. Each side keeps its free
//! nodes in gain buckets spanning `[-maxdeg, +maxdeg]`; buckets are FIFO
//! intrusive lists. A pass moves the best legal node until none is left,
//! then rolls back to the best balanced prefix.

use serde::{Deserialize, Serialize};

use super::random_balanced_partition;
use crate::error::{Error, Result};
use crate::hypergraph::{hyperedge_cut, Hypergraph, PartitionAssignment};
use crate::rng::{derive_seed, BenchRng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FmConfig {
    /// Balance slack: each side must hold between `(0.5 - ε)·n` and `(0.5 + ε)·n` nodes.
    pub epsilon: f64,
    pub max_passes: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for FmConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.05,
            max_passes: 64,
            restarts: 1,
            seed: 0,
        }
    }
}

impl FmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..0.5).contains(&self.epsilon) {
            return Err(Error::contract(format!(
                "epsilon {} outside [0, 0.5)",
                self.epsilon
            )));
        }
        if self.max_passes == 0 || self.restarts == 0 {
            return Err(Error::contract("max_passes and restarts must be at least 1"));
        }
        Ok(())
    }
}

/// Inclusive per-part size window for `k` parts with slack `epsilon`.
///
/// The window is widened to `[⌊n/k⌋, ⌈n/k⌉]` when rounding would otherwise
/// make it empty (small or indivisible `n`).
pub fn balance_bounds(n: usize, k: usize, epsilon: f64) -> (usize, usize) {
    // Nudge before rounding so that e.g. 0.45 * 20 = 9.000000000000002 stays 9.
    let lo = ((1.0 / k as f64 - epsilon) * n as f64 - 1e-9).ceil().max(0.0) as usize;
    let hi = ((1.0 / k as f64 + epsilon) * n as f64 + 1e-9).floor() as usize;
    (lo.min(n / k), hi.max(n.div_ceil(k)))
}

/// Refines a bipartition. Restart 0 starts from `initial`; further restarts
/// start from fresh random balanced splits. Returns the best result (lowest
/// cut, then lowest restart index).
pub fn fm_bipartition(
    hg: &Hypergraph,
    initial: &PartitionAssignment,
    cfg: &FmConfig,
) -> Result<(PartitionAssignment, usize)> {
    cfg.validate()?;
    if initial.k() != 2 {
        return Err(Error::UnsupportedK(initial.k()));
    }
    initial.ensure_len(hg.num_nodes(), "hypergraph")?;
    let n = hg.num_nodes();
    let (_, hi) = balance_bounds(n, 2, cfg.epsilon);
    let largest = initial.sizes().into_iter().max().unwrap();
    if largest > hi {
        return Err(Error::Unbalanced { largest, bound: hi });
    }

    let mut best = refine_from(hg, initial.parts().to_vec(), cfg);
    for r in 1..cfg.restarts {
        let mut rng = BenchRng::seed_from_u64(derive_seed(cfg.seed, r as u64));
        let start = random_balanced_partition(n, 2, &mut rng)?;
        let candidate = refine_from(hg, start.into_parts(), cfg);
        if candidate.1 < best.1 {
            best = candidate;
        }
    }
    let (parts, cut) = best;
    let pa = PartitionAssignment::new(parts, 2)?;
    debug_assert_eq!(hyperedge_cut(hg, &pa)?, cut);
    Ok((pa, cut))
}

fn refine_from(hg: &Hypergraph, parts: Vec<usize>, cfg: &FmConfig) -> (Vec<usize>, usize) {
    let mut state = FmState::new(hg, parts, cfg.epsilon);
    for _ in 0..cfg.max_passes {
        if state.run_pass() == 0 {
            break;
        }
    }
    let cut = state.cut();
    (state.into_parts(), cut)
}

const NIL: usize = usize::MAX;

/// Mutable FM state: side assignment, per-net side counts, gains, buckets.
///
/// Exposed so that callers can drive single moves and compare incrementally
/// maintained gains against [`FmState::gains_from_scratch`].
pub struct FmState<'a> {
    hg: &'a Hypergraph,
    side: Vec<usize>,
    counts: Vec<[usize; 2]>,
    sizes: [usize; 2],
    bounds: (usize, usize),
    gain: Vec<i64>,
    locked: Vec<bool>,
    cut: usize,
    // Buckets: index = gain + offset, one set per source side.
    offset: i64,
    head: [Vec<usize>; 2],
    tail: [Vec<usize>; 2],
    next: Vec<usize>,
    prev: Vec<usize>,
    max_bucket: [usize; 2],
}

impl<'a> FmState<'a> {
    pub fn new(hg: &'a Hypergraph, side: Vec<usize>, epsilon: f64) -> Self {
        let n = hg.num_nodes();
        let mut counts = vec![[0usize; 2]; hg.num_nets()];
        let mut sizes = [0; 2];
        for (e, net) in hg.nets().iter().enumerate() {
            for &v in net {
                counts[e][side[v]] += 1;
            }
        }
        for &s in &side {
            sizes[s] += 1;
        }
        let cut = counts.iter().filter(|c| c[0] > 0 && c[1] > 0).count();
        let maxdeg = hg.max_degree() as i64;
        let nb = (2 * maxdeg + 1) as usize;
        let mut state = Self {
            hg,
            side,
            counts,
            sizes,
            bounds: balance_bounds(n, 2, epsilon),
            gain: vec![0; n],
            locked: vec![false; n],
            cut,
            offset: maxdeg,
            head: [vec![NIL; nb], vec![NIL; nb]],
            tail: [vec![NIL; nb], vec![NIL; nb]],
            next: vec![NIL; n],
            prev: vec![NIL; n],
            max_bucket: [0; 2],
        };
        state.gain = state.gains_from_scratch();
        state.rebuild_buckets();
        state
    }

    pub fn cut(&self) -> usize {
        self.cut
    }

    pub fn sides(&self) -> &[usize] {
        &self.side
    }

    pub fn sizes(&self) -> [usize; 2] {
        self.sizes
    }

    pub fn bounds(&self) -> (usize, usize) {
        self.bounds
    }

    pub fn into_parts(self) -> Vec<usize> {
        self.side
    }

    pub fn is_locked(&self, v: usize) -> bool {
        self.locked[v]
    }

    /// Incrementally maintained gain of moving `v` to the other side.
    pub fn gain(&self, v: usize) -> i64 {
        self.gain[v]
    }

    /// Gains recomputed from the current side counts.
    pub fn gains_from_scratch(&self) -> Vec<i64> {
        (0..self.hg.num_nodes())
            .map(|v| {
                let from = self.side[v];
                let to = 1 - from;
                self.hg
                    .node_nets(v)
                    .iter()
                    .map(|&e| {
                        let c = self.counts[e];
                        (c[from] == 1) as i64 - (c[to] == 0) as i64
                    })
                    .sum()
            })
            .collect()
    }

    /// Unlocks every node and refills the buckets in node order.
    pub fn unlock_all(&mut self) {
        self.locked.fill(false);
        self.gain = self.gains_from_scratch();
        self.rebuild_buckets();
    }

    fn rebuild_buckets(&mut self) {
        for s in 0..2 {
            self.head[s].fill(NIL);
            self.tail[s].fill(NIL);
            self.max_bucket[s] = 0;
        }
        for v in 0..self.hg.num_nodes() {
            if !self.locked[v] {
                self.bucket_push(v);
            }
        }
    }

    fn bucket_index(&self, v: usize) -> usize {
        (self.gain[v] + self.offset) as usize
    }

    fn bucket_push(&mut self, v: usize) {
        let s = self.side[v];
        let b = self.bucket_index(v);
        self.next[v] = NIL;
        self.prev[v] = self.tail[s][b];
        if self.tail[s][b] == NIL {
            self.head[s][b] = v;
        } else {
            self.next[self.tail[s][b]] = v;
        }
        self.tail[s][b] = v;
        if b > self.max_bucket[s] {
            self.max_bucket[s] = b;
        }
    }

    fn bucket_remove(&mut self, v: usize) {
        let s = self.side[v];
        let b = self.bucket_index(v);
        let (p, nx) = (self.prev[v], self.next[v]);
        if p == NIL {
            self.head[s][b] = nx;
        } else {
            self.next[p] = nx;
        }
        if nx == NIL {
            self.tail[s][b] = p;
        } else {
            self.prev[nx] = p;
        }
        self.prev[v] = NIL;
        self.next[v] = NIL;
    }

    fn adjust_gain(&mut self, v: usize, delta: i64) {
        if self.locked[v] {
            self.gain[v] += delta;
            return;
        }
        self.bucket_remove(v);
        self.gain[v] += delta;
        self.bucket_push(v);
    }

    /// Highest-gain free node on side `s` (FIFO within a bucket).
    fn top(&mut self, s: usize) -> Option<usize> {
        loop {
            let b = self.max_bucket[s];
            let v = self.head[s][b];
            if v != NIL {
                return Some(v);
            }
            if b == 0 {
                return None;
            }
            self.max_bucket[s] -= 1;
        }
    }

    // Moves may overshoot the window by one node so that tight windows
    // (e.g. an exact half split) still admit swaps; only prefixes inside the
    // window are kept.
    fn can_leave(&self, s: usize) -> bool {
        let (lo, hi) = self.bounds;
        self.sizes[s] + 1 > lo && self.sizes[1 - s] < hi + 1
    }

    fn in_window(&self) -> bool {
        let (lo, hi) = self.bounds;
        self.sizes.iter().all(|s| (lo..=hi).contains(s))
    }

    /// Next move under the selection rule: best gain among legal sides, ties to
    /// the heavier side, then side 0.
    pub fn select_move(&mut self) -> Option<usize> {
        let mut pick: Option<(usize, i64, usize)> = None;
        for s in 0..2 {
            if !self.can_leave(s) {
                continue;
            }
            if let Some(v) = self.top(s) {
                let g = self.gain[v];
                let better = match pick {
                    None => true,
                    Some((_, pg, ps)) => g > pg || (g == pg && self.sizes[s] > self.sizes[ps]),
                };
                if better {
                    pick = Some((v, g, s));
                }
            }
        }
        pick.map(|p| p.0)
    }

    /// Moves `v` to the other side, locks it, and updates neighbor gains with
    /// the critical-net rules. Returns the gain realized by the move.
    pub fn move_node(&mut self, v: usize) -> i64 {
        let from = self.side[v];
        let to = 1 - from;
        let realized = self.gain[v];
        if !self.locked[v] {
            self.bucket_remove(v);
            self.locked[v] = true;
        }
        let hg = self.hg;
        for &e in hg.node_nets(v) {
            let net = hg.net(e);
            // Before the move.
            match self.counts[e][to] {
                0 => {
                    for &u in net {
                        if u != v {
                            self.adjust_gain(u, 1);
                        }
                    }
                }
                1 => {
                    if let Some(&u) = net.iter().find(|&&u| u != v && self.side[u] == to) {
                        self.adjust_gain(u, -1);
                    }
                }
                _ => {}
            }
            let before_cut = self.counts[e][0] > 0 && self.counts[e][1] > 0;
            self.counts[e][from] -= 1;
            self.counts[e][to] += 1;
            let after_cut = self.counts[e][0] > 0 && self.counts[e][1] > 0;
            match (before_cut, after_cut) {
                (true, false) => self.cut -= 1,
                (false, true) => self.cut += 1,
                _ => {}
            }
            // After the move.
            match self.counts[e][from] {
                0 => {
                    for &u in net {
                        if u != v {
                            self.adjust_gain(u, -1);
                        }
                    }
                }
                1 => {
                    if let Some(&u) = net.iter().find(|&&u| u != v && self.side[u] == from) {
                        self.adjust_gain(u, 1);
                    }
                }
                _ => {}
            }
        }
        self.side[v] = to;
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
        self.gain[v] = -realized;
        realized
    }

    /// One FM pass. Returns the cut improvement kept after rollback (≥ 0).
    pub fn run_pass(&mut self) -> usize {
        self.unlock_all();
        let start_cut = self.cut;
        let mut moves = Vec::new();
        let mut best_cut = self.cut;
        let mut best_len = 0;
        while let Some(v) = self.select_move() {
            self.move_node(v);
            moves.push(v);
            if self.cut < best_cut && self.in_window() {
                best_cut = self.cut;
                best_len = moves.len();
            }
        }
        for &v in moves[best_len..].iter().rev() {
            self.undo_move(v);
        }
        debug_assert_eq!(self.cut, best_cut);
        start_cut - best_cut
    }

    // Reverses a move without touching buckets; gains are rebuilt by the next
    // pass.
    fn undo_move(&mut self, v: usize) {
        let from = self.side[v];
        let to = 1 - from;
        for &e in self.hg.node_nets(v) {
            let before_cut = self.counts[e][0] > 0 && self.counts[e][1] > 0;
            self.counts[e][from] -= 1;
            self.counts[e][to] += 1;
            let after_cut = self.counts[e][0] > 0 && self.counts[e][1] > 0;
            match (before_cut, after_cut) {
                (true, false) => self.cut -= 1,
                (false, true) => self.cut += 1,
                _ => {}
            }
        }
        self.side[v] = to;
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
    }
}
