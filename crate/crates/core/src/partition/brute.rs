use super::fm::balance_bounds;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, PartitionAssignment};

/// Upper bound on `k^n` accepted by [`brute_force_min_cut`].
pub const BRUTE_FORCE_LIMIT: u64 = 1 << 24;

/// Exhaustive minimum hyperedge cut under the balance window of
/// [`balance_bounds`]. Ties resolve to the lexicographically smallest
/// assignment vector.
///
/// Only label-canonical assignments are visited (each node uses at most one
/// more than the largest label seen so far); the lexicographically smallest
/// member of every relabeling class is canonical, so the tie-break is
/// unaffected.
pub fn brute_force_min_cut(
    hg: &Hypergraph,
    k: usize,
    epsilon: f64,
) -> Result<(PartitionAssignment, usize)> {
    let n = hg.num_nodes();
    if k < 2 || k > n {
        return Err(Error::contract(format!("need 2 <= k <= n, got k = {k}, n = {n}")));
    }
    let too_large = (0..n)
        .try_fold(1u64, |acc, _| acc.checked_mul(k as u64).filter(|&x| x <= BRUTE_FORCE_LIMIT))
        .is_none();
    if too_large {
        return Err(Error::TooLarge { n, k });
    }
    let (lo, hi) = balance_bounds(n, k, epsilon);

    let mut search = Search {
        hg,
        k,
        lo,
        hi,
        parts: vec![0; n],
        sizes: vec![0; k],
        best: None,
    };
    search.recurse(0, 0);
    let (parts, cut) = search
        .best
        .ok_or_else(|| Error::contract("no assignment satisfies the balance window"))?;
    Ok((PartitionAssignment::new(parts, k)?, cut))
}

struct Search<'a> {
    hg: &'a Hypergraph,
    k: usize,
    lo: usize,
    hi: usize,
    parts: Vec<usize>,
    sizes: Vec<usize>,
    best: Option<(Vec<usize>, usize)>,
}

impl Search<'_> {
    fn recurse(&mut self, v: usize, used: usize) {
        let n = self.parts.len();
        if v == n {
            if self.sizes.iter().all(|&s| s >= self.lo) {
                let cut = self.cut();
                if self.best.as_ref().is_none_or(|b| cut < b.1) {
                    self.best = Some((self.parts.clone(), cut));
                }
            }
            return;
        }
        let remaining = n - v;
        let deficit: usize = self.sizes.iter().map(|&s| self.lo.saturating_sub(s)).sum();
        if deficit > remaining {
            return;
        }
        let max_label = (used + 1).min(self.k);
        for p in 0..max_label {
            if self.sizes[p] == self.hi {
                continue;
            }
            self.parts[v] = p;
            self.sizes[p] += 1;
            self.recurse(v + 1, used.max(p + 1));
            self.sizes[p] -= 1;
        }
    }

    fn cut(&self) -> usize {
        self.hg
            .nets()
            .iter()
            .filter(|net| net[1..].iter().any(|&v| self.parts[v] != self.parts[net[0]]))
            .count()
    }
}
