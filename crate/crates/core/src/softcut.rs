//! Expected normalized cut under soft assignments, and a gradient-descent
//! partitioner over free per-node logits.
//!
//! For a row-stochastic `Y` (n × k) on a graph with adjacency `A` and degrees
//! `d`:
//!
//! ```text
//! Γ_k   = Σ_i d_i Y_ik
//! cut_k = Σ_{i,j} A_ij Y_ik (1 − Y_jk) = Γ_k − Σ_i Y_ik (AY)_ik
//! L     = Σ_k cut_k / Γ_k  +  λ Σ_k (Σ_i Y_ik − n/k)²
//! ```
//!
//! With `Y = softmax(Z)` row-wise, the gradient with respect to `Y` is
//!
//! ```text
//! ∂L/∂Y_ik = (d_i − 2 (AY)_ik) / Γ_k − cut_k d_i / Γ_k² + 2λ (Σ_j Y_jk − n/k)
//! ```
//!
//! and `∂L/∂Z_ik = Y_ik (G_ik − Σ_m Y_im G_im)` with `G = ∂L/∂Y`.

use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{PartitionAssignment, WeightedGraph};
use crate::rng::BenchRng;

/// Γ_k below this is treated as a collapsed partition.
pub const GAMMA_FLOOR: f64 = 1e-12;
/// Minimum loss decrease that counts as progress for early stopping.
pub const IMPROVEMENT_TOL: f64 = 1e-9;

/// Row-stochastic soft assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftAssignment {
    probs: Array2<f64>,
}

impl SoftAssignment {
    pub fn new(probs: Array2<f64>) -> Result<Self> {
        let (_, k) = probs.dim();
        if k < 2 {
            return Err(Error::contract(format!("soft assignment needs k >= 2, got {k}")));
        }
        for (i, row) in probs.axis_iter(Axis(0)).enumerate() {
            if row.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
                return Err(Error::contract(format!("row {i} has an entry outside [0, 1]")));
            }
            let s = row.sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::contract(format!("row {i} sums to {s}")));
            }
        }
        Ok(Self { probs })
    }

    /// Row-wise softmax of a logit matrix.
    pub fn from_logits(logits: &Array2<f64>) -> Self {
        let mut probs = logits.clone();
        for mut row in probs.axis_iter_mut(Axis(0)) {
            let m = row.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
            row.mapv_inplace(|z| (z - m).exp());
            let s = row.sum();
            row /= s;
        }
        Self { probs }
    }

    pub fn one_hot(pa: &PartitionAssignment) -> Self {
        let mut probs = Array2::zeros((pa.len(), pa.k()));
        for (i, &p) in pa.parts().iter().enumerate() {
            probs[[i, p]] = 1.0;
        }
        Self { probs }
    }

    pub fn uniform(n: usize, k: usize) -> Self {
        Self {
            probs: Array2::from_elem((n, k), 1.0 / k as f64),
        }
    }

    pub fn probs(&self) -> &Array2<f64> {
        &self.probs
    }

    pub fn num_nodes(&self) -> usize {
        self.probs.nrows()
    }

    pub fn k(&self) -> usize {
        self.probs.ncols()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftcutConfig {
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub patience: usize,
    /// Weight λ of the squared part-size penalty.
    pub balance_weight: f64,
    /// Standard deviation of the Gaussian logit initialization.
    pub init_scale: f64,
    pub seed: u64,
}

impl Default for SoftcutConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-2,
            max_epochs: 5000,
            patience: 5,
            balance_weight: 0.0,
            init_scale: 0.1,
            seed: 0,
        }
    }
}

impl SoftcutConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) {
            return Err(Error::contract("learning_rate must be positive"));
        }
        if self.patience == 0 {
            return Err(Error::contract("patience must be at least 1"));
        }
        if !(self.balance_weight >= 0.0) || !(self.init_scale >= 0.0) {
            return Err(Error::contract("balance_weight and init_scale must be non-negative"));
        }
        Ok(())
    }
}

struct Terms {
    loss: f64,
    ay: Array2<f64>,
    gamma: Array1<f64>,
    cut: Array1<f64>,
    counts: Array1<f64>,
}

fn check_graph(g: &WeightedGraph, n: usize) -> Result<()> {
    if g.num_nodes() != n {
        return Err(Error::contract(format!(
            "assignment has {n} rows but the graph has {} nodes",
            g.num_nodes()
        )));
    }
    if let Some(node) = g.degrees().iter().position(|&d| d <= 0.0) {
        return Err(Error::ZeroDegreeNode { node });
    }
    Ok(())
}

fn terms(g: &WeightedGraph, y: &Array2<f64>, lambda: f64) -> Result<Terms> {
    let (n, k) = y.dim();
    check_graph(g, n)?;
    let mut ay = Array2::<f64>::zeros((n, k));
    for &(u, v, w) in g.edges() {
        for c in 0..k {
            ay[[u, c]] += w * y[[v, c]];
            ay[[v, c]] += w * y[[u, c]];
        }
    }
    let d = g.degrees();
    let mut gamma = Array1::<f64>::zeros(k);
    let mut inner = Array1::<f64>::zeros(k);
    for i in 0..n {
        for c in 0..k {
            gamma[c] += d[i] * y[[i, c]];
            inner[c] += y[[i, c]] * ay[[i, c]];
        }
    }
    let counts = y.sum_axis(Axis(0));
    let target = n as f64 / k as f64;
    let mut loss = 0.0;
    let mut cut = Array1::<f64>::zeros(k);
    for c in 0..k {
        if gamma[c] < GAMMA_FLOOR {
            return Err(Error::CollapsedPartition {
                part: c,
                volume: gamma[c],
            });
        }
        cut[c] = gamma[c] - inner[c];
        loss += cut[c] / gamma[c] + lambda * (counts[c] - target).powi(2);
    }
    Ok(Terms {
        loss,
        ay,
        gamma,
        cut,
        counts,
    })
}

/// Expected normalized cut plus `λ` times the squared part-size deviation.
pub fn soft_ncut_loss(g: &WeightedGraph, y: &SoftAssignment, lambda: f64) -> Result<f64> {
    Ok(terms(g, &y.probs, lambda)?.loss)
}

/// Loss and its gradient with respect to the logits `z`.
pub fn soft_ncut_loss_and_grad(
    g: &WeightedGraph,
    z: &Array2<f64>,
    lambda: f64,
) -> Result<(f64, Array2<f64>)> {
    let y = SoftAssignment::from_logits(z).probs;
    let t = terms(g, &y, lambda)?;
    let (n, k) = y.dim();
    let d = g.degrees();
    let target = n as f64 / k as f64;
    let mut grad_y = Array2::<f64>::zeros((n, k));
    for i in 0..n {
        for c in 0..k {
            grad_y[[i, c]] = (d[i] - 2.0 * t.ay[[i, c]]) / t.gamma[c]
                - t.cut[c] * d[i] / (t.gamma[c] * t.gamma[c])
                + 2.0 * lambda * (t.counts[c] - target);
        }
    }
    let mut grad_z = Array2::<f64>::zeros((n, k));
    for i in 0..n {
        let mean: f64 = (0..k).map(|c| y[[i, c]] * grad_y[[i, c]]).sum();
        for c in 0..k {
            grad_z[[i, c]] = y[[i, c]] * (grad_y[[i, c]] - mean);
        }
    }
    Ok((t.loss, grad_z))
}

/// `∂L/∂Z` at logits `z`.
pub fn soft_ncut_grad(g: &WeightedGraph, z: &Array2<f64>, lambda: f64) -> Result<Array2<f64>> {
    Ok(soft_ncut_loss_and_grad(g, z, lambda)?.1)
}

/// Per-row argmax, ties to the lowest part index.
pub fn harden(y: &SoftAssignment) -> PartitionAssignment {
    let parts = y
        .probs
        .axis_iter(Axis(0))
        .map(|row| {
            let mut best = 0;
            for (c, &p) in row.iter().enumerate() {
                if p > row[best] {
                    best = c;
                }
            }
            best
        })
        .collect();
    PartitionAssignment::new(parts, y.k()).expect("argmax is always < k")
}

#[derive(Debug, Clone)]
pub struct SoftcutOutcome {
    /// Assignment at the best-loss epoch.
    pub assignment: SoftAssignment,
    pub best_loss: f64,
    pub best_epoch: usize,
    /// Loss at every evaluated epoch.
    pub history: Vec<f64>,
    /// True when patience ran out before `max_epochs`.
    pub stopped_early: bool,
}

impl SoftcutOutcome {
    /// Running minimum of `history`.
    pub fn best_envelope(&self) -> Vec<f64> {
        self.history
            .iter()
            .scan(f64::INFINITY, |best, &l| {
                *best = best.min(l);
                Some(*best)
            })
            .collect()
    }
}

/// Plain gradient descent on row-softmax logits initialized with
/// `init_scale · N(0, 1)` noise.
///
/// Stops after `max_epochs`, or once the best loss has not improved by at
/// least [`IMPROVEMENT_TOL`] for `patience` consecutive epochs.
pub fn optimize_soft(g: &WeightedGraph, k: usize, cfg: &SoftcutConfig) -> Result<SoftcutOutcome> {
    cfg.validate()?;
    let n = g.num_nodes();
    if k < 2 || n < k {
        return Err(Error::contract(format!("need 2 <= k <= n, got k = {k}, n = {n}")));
    }
    check_graph(g, n)?;
    let mut rng = BenchRng::seed_from_u64(cfg.seed);
    let mut z = Array2::from_shape_simple_fn((n, k), || cfg.init_scale * rng.normal());

    let mut history = Vec::new();
    let mut best_loss = f64::INFINITY;
    let mut best_z = z.clone();
    let mut best_epoch = 0;
    let mut stall = 0;
    let mut stopped_early = false;
    for epoch in 0..cfg.max_epochs {
        let (loss, grad) = soft_ncut_loss_and_grad(g, &z, cfg.balance_weight)?;
        if !loss.is_finite() || grad.iter().any(|x| !x.is_finite()) {
            return Err(Error::Divergence { epoch, loss });
        }
        history.push(loss);
        if loss < best_loss - IMPROVEMENT_TOL {
            best_loss = loss;
            best_z.assign(&z);
            best_epoch = epoch;
            stall = 0;
        } else {
            stall += 1;
            if stall >= cfg.patience {
                stopped_early = true;
                break;
            }
        }
        z.scaled_add(-cfg.learning_rate, &grad);
    }
    Ok(SoftcutOutcome {
        assignment: SoftAssignment::from_logits(&best_z),
        best_loss,
        best_epoch,
        history,
        stopped_early,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::simple_ncut;

    fn c4() -> WeightedGraph {
        WeightedGraph::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap()
    }

    fn random_graph(rng: &mut BenchRng, n: usize) -> WeightedGraph {
        // Ring for connectivity, plus random chords.
        let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 0.5 + rng.unit_f64())).collect();
        for _ in 0..2 * n {
            let (u, v) = (rng.below(n), rng.below(n));
            if u != v {
                edges.push((u, v, 0.1 + rng.unit_f64()));
            }
        }
        WeightedGraph::from_edges(n, edges).unwrap()
    }

    fn random_logits(rng: &mut BenchRng, n: usize, k: usize) -> Array2<f64> {
        Array2::from_shape_simple_fn((n, k), || rng.normal())
    }

    #[test]
    fn uniform_loss_is_k_minus_one() {
        let mut rng = BenchRng::seed_from_u64(1);
        let g = random_graph(&mut rng, 12);
        for k in [2, 3, 4, 8] {
            let l = soft_ncut_loss(&g, &SoftAssignment::uniform(12, k), 0.0).unwrap();
            assert!((l - (k as f64 - 1.0)).abs() < 1e-9, "k={k}: {l}");
        }
    }

    #[test]
    fn one_hot_matches_hard_ncut() {
        let pa = PartitionAssignment::new(vec![0, 0, 1, 1], 2).unwrap();
        let l = soft_ncut_loss(&c4(), &SoftAssignment::one_hot(&pa), 0.0).unwrap();
        assert!((l - 1.0).abs() < 1e-12);
        assert!((l - simple_ncut(&c4(), &pa).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn balanced_one_hot_has_no_penalty() {
        let pa = PartitionAssignment::new(vec![0, 0, 1, 1], 2).unwrap();
        let y = SoftAssignment::one_hot(&pa);
        let a = soft_ncut_loss(&c4(), &y, 0.0).unwrap();
        let b = soft_ncut_loss(&c4(), &y, 1.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_degree_rejected() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 1.0)]).unwrap();
        assert!(matches!(
            soft_ncut_loss(&g, &SoftAssignment::uniform(3, 2), 0.0),
            Err(Error::ZeroDegreeNode { node: 2 })
        ));
    }

    #[test]
    fn collapsed_partition_rejected() {
        let pa = PartitionAssignment::new(vec![0, 0, 0, 0], 2).unwrap();
        assert!(matches!(
            soft_ncut_loss(&c4(), &SoftAssignment::one_hot(&pa), 0.0),
            Err(Error::CollapsedPartition { part: 1, .. })
        ));
    }

    #[test]
    fn uniform_point_is_stationary() {
        let mut rng = BenchRng::seed_from_u64(4);
        let g = random_graph(&mut rng, 15);
        for k in [2, 3, 5] {
            let grad = soft_ncut_grad(&g, &Array2::from_elem((15, k), 0.7), 0.0).unwrap();
            assert!(grad.iter().all(|x| x.abs() < 1e-12), "k={k}");
        }
    }

    fn central_difference(g: &WeightedGraph, z: &Array2<f64>, lambda: f64, h: f64) -> Array2<f64> {
        let mut out = Array2::zeros(z.dim());
        let mut zp = z.clone();
        for idx in ndarray::indices(z.dim()) {
            let orig = zp[idx];
            zp[idx] = orig + h;
            let up = soft_ncut_loss(g, &SoftAssignment::from_logits(&zp), lambda).unwrap();
            zp[idx] = orig - h;
            let down = soft_ncut_loss(g, &SoftAssignment::from_logits(&zp), lambda).unwrap();
            zp[idx] = orig;
            out[idx] = (up - down) / (2.0 * h);
        }
        out
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = BenchRng::seed_from_u64(20);
        for (k, lambda) in [(2, 0.0), (3, 0.05), (4, 0.0)] {
            let g = random_graph(&mut rng, 20);
            let z = random_logits(&mut rng, 20, k);
            let analytic = soft_ncut_grad(&g, &z, lambda).unwrap();
            let numeric = central_difference(&g, &z, lambda, 1e-6);
            let diff = (&analytic - &numeric).mapv(|x| x * x).sum().sqrt();
            let scale = numeric.mapv(|x| x * x).sum().sqrt().max(1e-12);
            assert!(diff / scale <= 1e-5, "k={k}: rel err {}", diff / scale);
        }
    }

    #[test]
    fn balance_gradient_sign() {
        // Saturated logits, 3 nodes in part 0 and 1 in part 1 on C4.
        let z = ndarray::array![[20.0, 0.0], [20.0, 0.0], [20.0, 0.0], [0.0, 20.0]];
        let with = soft_ncut_grad(&c4(), &z, 1.0).unwrap();
        let without = soft_ncut_grad(&c4(), &z, 0.0).unwrap();
        let balance = &with - &without;
        for i in 0..3 {
            assert!(balance[[i, 0]] > 0.0, "surplus class must be pushed down");
        }
    }

    #[test]
    fn harden_rules() {
        let y = SoftAssignment::new(ndarray::array![[0.9, 0.1], [0.5, 0.5], [0.2, 0.8]]).unwrap();
        assert_eq!(harden(&y).parts(), &[0, 0, 1]);
        let pa = PartitionAssignment::new(vec![2, 0, 1, 2], 3).unwrap();
        assert_eq!(harden(&SoftAssignment::one_hot(&pa)), pa);
    }

    #[test]
    fn soft_assignment_validation() {
        assert!(SoftAssignment::new(ndarray::array![[0.6, 0.6]]).is_err());
        assert!(SoftAssignment::new(ndarray::array![[1.0]]).is_err());
        assert!(SoftAssignment::new(ndarray::array![[1.2, -0.2]]).is_err());
    }

    #[test]
    fn zero_init_stalls_at_k_minus_one() {
        let mut rng = BenchRng::seed_from_u64(3);
        let g = random_graph(&mut rng, 10);
        let cfg = SoftcutConfig {
            init_scale: 0.0,
            ..SoftcutConfig::default()
        };
        let out = optimize_soft(&g, 3, &cfg).unwrap();
        assert!(out.stopped_early);
        assert!((out.best_loss - 2.0).abs() < 1e-9);
    }

    #[test]
    fn history_envelope_non_increasing() {
        let mut rng = BenchRng::seed_from_u64(8);
        let g = random_graph(&mut rng, 30);
        let out = optimize_soft(&g, 2, &SoftcutConfig { max_epochs: 300, ..Default::default() }).unwrap();
        let env = out.best_envelope();
        assert!(env.windows(2).all(|w| w[1] <= w[0]));
        assert!(out.best_loss <= out.history[0]);
    }
}
