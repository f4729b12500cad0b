//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every tolerance is pinned below.

use std::path::Path;
use std::time::{Duration, Instant};

use ndarray::Array2;

use hgbench_core::distributions::{cleanup_netlist, extract_distributions, l1_distance, SizeDistribution};
use hgbench_core::generator::{
    generate_erdos_renyi, generate_planted, rent_cut_budget, GeneratorParams,
};
use hgbench_core::harness::bundle::{load_bundle, write_bundle, BudgetScope, BundleMeta};
use hgbench_core::harness::hgr::{emit_hgr, parse_hgr, parse_hgr_raw};
use hgbench_core::harness::partfile::{emit_partition, parse_partition, read_partition, write_partition};
use hgbench_core::hypergraph::{
    avg_shortest_path, balancedness, hyperedge_cut, hypergraph_avg_path,
    simple_ncut,
};
use hgbench_core::netmodel::{Clique, Fanout, NetModel, Star};
use hgbench_core::partition::{
    balance_bounds, brute_force_min_cut, fm_bipartition, random_balanced_partition, FmConfig,
    FmState,
};
use hgbench_core::rng::BenchRng;
use hgbench_core::softcut::{
    harden, optimize_soft, soft_ncut_grad, soft_ncut_loss, soft_ncut_loss_and_grad,
    SoftAssignment, SoftcutConfig,
};
use hgbench_core::{Hypergraph, PartitionAssignment, WeightedGraph};

// Criterion 1.
const C1_NODES: usize = 11161;
const C1_SEED: u64 = 1;
const C1_NETS_TARGET: f64 = 10997.0;
const C1_NETS_REL_TOL: f64 = 0.10;
const C1_L1_MAX: f64 = 0.05;
const C1_PATH_TARGET: f64 = 3.69;
const C1_PATH_TOL: f64 = 0.5;
const C1_TIME: Duration = Duration::from_secs(30);
// Criterion 2.
const C2_NODES: usize = 1000;
const C2_P: f64 = 0.1;
const C2_SEED: u64 = 1;
const C2_EDGES_TARGET: f64 = 49950.0;
const C2_EDGES_TOL: f64 = 636.0;
const C2_PATH_TARGET: f64 = 1.89;
const C2_PATH_TOL: f64 = 0.05;
const C2_TIME: Duration = Duration::from_secs(10);
// Criterion 3.
const C3_NODES: usize = 5000;
const C3_BUDGET: usize = 727;
const C3_SEEDS: u64 = 10;
const C3_MEAN_RANGE: (f64, f64) = (550.0, 760.0);
const C3_BAL_MAX: f64 = 0.55;
const C3_TIME: Duration = Duration::from_secs(60);
// Criterion 4.
const C4_CASES: [(usize, usize); 2] = [(4, 459), (8, 289)];
// Criterion 5.
const C5_INSTANCES: usize = 30;
const C5_MIN_MATCHES: usize = 27;
const C5_RESTARTS: usize = 20;
const C5_TRACES: usize = 5;
const C5_TIME: Duration = Duration::from_secs(30);
// Criterion 6.
const C6_TOL: f64 = 1e-9;
const C6_FD_STEP: f64 = 1e-6;
const C6_FD_REL_TOL: f64 = 1e-5;
const C6_TIME: Duration = Duration::from_secs(20);
// Criterion 7.
const C7_SEEDS: u64 = 10;
const C7_MIN_HITS: usize = 7;
const C7_GRAD_MAX: f64 = 1e-10;
const C7_TIME: Duration = Duration::from_secs(10);
// Criterion 8.
const C8_GRAPHS: usize = 100;
const C8_TOL: f64 = 1e-12;
const C8_TIME: Duration = Duration::from_secs(5);

const EPSILON: f64 = 0.05;

fn fixture(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let r = f();
    let t = start.elapsed();
    let note = format!("{:.2}s / {}s", t.as_secs_f64(), limit.as_secs());
    match r {
        Ok(d) if t <= limit => Ok(format!("{d}; {note}")),
        Ok(d) => Err(format!("{d}; over time {note}")),
        Err(d) => Err(format!("{d}; {note}")),
    }
}

fn random_hypergraph(rng: &mut BenchRng, n: usize, nets: usize, max_size: usize) -> Hypergraph {
    let nets = (0..nets)
        .map(|_| {
            let s = 2 + rng.below(max_size - 1);
            rng.sample_indices(n, s.min(n)).unwrap()
        })
        .collect();
    Hypergraph::new(n, nets).unwrap()
}

/// Ring plus random chords, positive weights.
fn random_graph(rng: &mut BenchRng, n: usize) -> WeightedGraph {
    let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 0.5 + rng.unit_f64())).collect();
    for _ in 0..n {
        let (u, v) = (rng.below(n), rng.below(n));
        if u != v {
            edges.push((u, v, 0.1 + rng.unit_f64()));
        }
    }
    WeightedGraph::from_edges(n, edges).unwrap()
}

fn bridged_triangles() -> Hypergraph {
    Hypergraph::new(
        6,
        vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5], vec![2, 3]],
    )
    .unwrap()
}

fn c1_generator_fidelity() -> Outcome {
    let raw = parse_hgr_raw(&fixture("ispd_like.hgr")).map_err(|e| e.to_string())?;
    let clean = cleanup_netlist(&raw).map_err(|e| e.to_string())?;
    let (ndv, gdv) = extract_distributions(&clean).map_err(|e| e.to_string())?;
    timed(C1_TIME, || {
        let params = GeneratorParams::new(C1_NODES, 2, ndv.clone(), gdv.clone()).with_seed(C1_SEED);
        let b = generate_planted(&params).map_err(|e| e.to_string())?;
        let hg = &b.hypergraph;
        let nets = hg.num_nets() as f64;
        let ndv_out =
            SizeDistribution::from_samples(hg.nets().iter().map(|n| n.len() as u32)).unwrap();
        let drawn = SizeDistribution::from_samples(b.max_degrees.iter().copied()).unwrap();
        let l1_ndv = l1_distance(&ndv, &ndv_out);
        let l1_gdv = l1_distance(&gdv, &drawn);
        let path = hypergraph_avg_path(hg, C1_SEED).map_err(|e| e.to_string())?;
        let ok = (nets - C1_NETS_TARGET).abs() <= C1_NETS_REL_TOL * C1_NETS_TARGET
            && l1_ndv <= C1_L1_MAX
            && l1_gdv <= C1_L1_MAX
            && (path.mean - C1_PATH_TARGET).abs() <= C1_PATH_TOL;
        check(
            ok,
            format!(
                "nets {nets} (target {C1_NETS_TARGET} ± {:.0}%), L1 ndv {l1_ndv:.4}, L1 gdv {l1_gdv:.4} (≤ {C1_L1_MAX}), \
                 avg path {:.3} (target {C1_PATH_TARGET} ± {C1_PATH_TOL}, sampled {}), skipped {}",
                C1_NETS_REL_TOL * 100.0,
                path.mean,
                path.sampled,
                b.stats.skipped_nets
            ),
        )
    })
}

fn c2_erdos_renyi() -> Outcome {
    timed(C2_TIME, || {
        let g = generate_erdos_renyi(C2_NODES, C2_P, C2_SEED).map_err(|e| e.to_string())?;
        let m = g.num_edges() as f64;
        let path = avg_shortest_path(&g, C2_SEED).map_err(|e| e.to_string())?;
        check(
            (m - C2_EDGES_TARGET).abs() <= C2_EDGES_TOL
                && (path.mean - C2_PATH_TARGET).abs() <= C2_PATH_TOL,
            format!(
                "edges {m} (target {C2_EDGES_TARGET} ± {C2_EDGES_TOL}), avg path {:.4} (target {C2_PATH_TARGET} ± {C2_PATH_TOL})",
                path.mean
            ),
        )
    })
}

fn c3_known_upper_bound() -> Outcome {
    timed(C3_TIME, || {
        let budget = rent_cut_budget(C3_NODES, 2, 4.0, 0.665).map_err(|e| e.to_string())?;
        let mut refined = Vec::new();
        let mut worst_bal: f64 = 0.0;
        let mut violations = Vec::new();
        for seed in 0..C3_SEEDS {
            let params = GeneratorParams::new(
                C3_NODES,
                2,
                SizeDistribution::example_ndv(),
                SizeDistribution::example_gdv(),
            )
            .with_seed(seed);
            let b = generate_planted(&params).map_err(|e| e.to_string())?;
            let (pa, cut) = (b.refined.as_ref().unwrap(), b.refined_cut.unwrap());
            let bal = balancedness(pa).unwrap();
            worst_bal = worst_bal.max(bal);
            if b.planted_cut > budget || cut > b.planted_cut || bal > C3_BAL_MAX {
                violations.push(seed);
            }
            refined.push(cut as f64);
        }
        let mean = refined.iter().sum::<f64>() / refined.len() as f64;
        check(
            budget == C3_BUDGET
                && violations.is_empty()
                && (C3_MEAN_RANGE.0..=C3_MEAN_RANGE.1).contains(&mean),
            format!(
                "budget {budget} (expect {C3_BUDGET}), refined mean {mean:.1} over {C3_SEEDS} seeds \
                 (window {:?}), worst balancedness {worst_bal:.4} (≤ {C3_BAL_MAX}), per-seed violations {violations:?}",
                C3_MEAN_RANGE
            ),
        )
    })
}

fn c4_multiway_planted() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for (k, expect) in C4_CASES {
        let budget = rent_cut_budget(C3_NODES, k, 4.0, 0.665).unwrap();
        let params = GeneratorParams::new(
            C3_NODES,
            k,
            SizeDistribution::example_ndv(),
            SizeDistribution::example_gdv(),
        )
        .with_seed(k as u64);
        let b = generate_planted(&params).map_err(|e| e.to_string())?;
        let bal = balancedness(&b.planted).unwrap();
        let scope = BundleMeta::from_benchmark(&b).budget_scope;
        let this = budget == expect
            && b.planted_cut <= budget
            && (bal - 1.0 / k as f64).abs() <= 1.0 / C3_NODES as f64
            && b.refined.is_none()
            && scope == BudgetScope::PerPart;
        ok &= this;
        details.push(format!(
            "k={k}: budget {budget} (expect {expect}), planted cut {}, balancedness {bal:.4}, scope {scope:?}",
            b.planted_cut
        ));
    }
    check(ok, details.join("; "))
}

fn c5_fm_vs_brute_force() -> Outcome {
    timed(C5_TIME, || {
        let mut rng = BenchRng::seed_from_u64(5);
        let (mut matches, mut below, mut unbalanced) = (0, 0, 0);
        for i in 0..C5_INSTANCES {
            let n = 6 + rng.below(7);
            let nets = 4 + rng.below(17);
            let hg = random_hypergraph(&mut rng, n, nets, 4);
            let (_, opt) = brute_force_min_cut(&hg, 2, EPSILON).map_err(|e| e.to_string())?;
            let cfg = FmConfig {
                restarts: C5_RESTARTS,
                seed: i as u64,
                ..FmConfig::default()
            };
            let init = random_balanced_partition(n, 2, &mut BenchRng::seed_from_u64(i as u64)).unwrap();
            let (pa, cut) = fm_bipartition(&hg, &init, &cfg).map_err(|e| e.to_string())?;
            let (lo, hi) = balance_bounds(n, 2, EPSILON);
            if !pa.sizes().iter().all(|s| (lo..=hi).contains(s)) {
                unbalanced += 1;
            }
            if hyperedge_cut(&hg, &pa).unwrap() != cut {
                return Err(format!("instance {i}: reported cut differs from recomputed cut"));
            }
            match cut.cmp(&opt) {
                std::cmp::Ordering::Equal => matches += 1,
                std::cmp::Ordering::Less => below += 1,
                std::cmp::Ordering::Greater => {}
            }
        }

        let mut trace_errors = 0;
        let mut moves = 0;
        for t in 0..C5_TRACES {
            let mut rng = BenchRng::seed_from_u64(100 + t as u64);
            let hg = random_hypergraph(&mut rng, 40, 80, 6);
            let init = random_balanced_partition(40, 2, &mut rng).unwrap();
            let mut st = FmState::new(&hg, init.into_parts(), EPSILON);
            while let Some(v) = st.select_move() {
                st.move_node(v);
                moves += 1;
                let scratch = st.gains_from_scratch();
                if (0..40).any(|u| st.gain(u) != scratch[u])
                    || st.cut() != hyperedge_cut(&hg, &PartitionAssignment::new(st.sides().to_vec(), 2).unwrap()).unwrap()
                {
                    trace_errors += 1;
                }
            }
        }
        check(
            matches >= C5_MIN_MATCHES && below == 0 && unbalanced == 0 && trace_errors == 0,
            format!(
                "FM = optimum on {matches}/{C5_INSTANCES} (need {C5_MIN_MATCHES}), below optimum {below}, \
                 unbalanced {unbalanced}; gain mismatches {trace_errors} over {moves} moves in {C5_TRACES} traces"
            ),
        )
    })
}

fn c6_soft_loss_exactness() -> Outcome {
    timed(C6_TIME, || {
        let mut rng = BenchRng::seed_from_u64(6);
        let mut worst_uniform: f64 = 0.0;
        for _ in 0..10 {
            let n = 10 + rng.below(30);
            let g = random_graph(&mut rng, n);
            for k in [2, 3, 4, 8] {
                let l = soft_ncut_loss(&g, &SoftAssignment::uniform(n, k), 0.0).map_err(|e| e.to_string())?;
                worst_uniform = worst_uniform.max((l - (k as f64 - 1.0)).abs());
            }
        }

        let mut worst_onehot: f64 = 0.0;
        for _ in 0..20 {
            let n = 8 + rng.below(30);
            let k = 2 + rng.below(3);
            let g = random_graph(&mut rng, n);
            // Every part gets at least one node.
            let mut parts: Vec<usize> = (0..n).map(|i| if i < k { i } else { rng.below(k) }).collect();
            rng.shuffle(&mut parts);
            let pa = PartitionAssignment::new(parts, k).unwrap();
            let soft = soft_ncut_loss(&g, &SoftAssignment::one_hot(&pa), 0.0).map_err(|e| e.to_string())?;
            let hard = simple_ncut(&g, &pa).map_err(|e| e.to_string())?;
            worst_onehot = worst_onehot.max((soft - hard).abs());
        }

        let mut worst_rel: f64 = 0.0;
        for _ in 0..10 {
            let n = 5 + rng.below(46);
            let k = 2 + rng.below(3);
            let lambda = if rng.below(2) == 0 { 0.0 } else { 0.01 + rng.unit_f64() };
            let g = random_graph(&mut rng, n);
            let z = Array2::from_shape_simple_fn((n, k), || rng.normal());
            let (_, grad) = soft_ncut_loss_and_grad(&g, &z, lambda).map_err(|e| e.to_string())?;
            let mut num = 0.0;
            let mut den = 0.0;
            for i in 0..n {
                for c in 0..k {
                    let mut zp = z.clone();
                    zp[[i, c]] += C6_FD_STEP;
                    let mut zm = z.clone();
                    zm[[i, c]] -= C6_FD_STEP;
                    let lp = soft_ncut_loss(&g, &SoftAssignment::from_logits(&zp), lambda).unwrap();
                    let lm = soft_ncut_loss(&g, &SoftAssignment::from_logits(&zm), lambda).unwrap();
                    let fd = (lp - lm) / (2.0 * C6_FD_STEP);
                    num += (grad[[i, c]] - fd).powi(2);
                    den += fd.powi(2);
                }
            }
            worst_rel = worst_rel.max(num.sqrt() / den.sqrt().max(1e-300));
        }
        check(
            worst_uniform <= C6_TOL && worst_onehot <= C6_TOL && worst_rel <= C6_FD_REL_TOL,
            format!(
                "uniform |L-(k-1)| max {worst_uniform:.2e}, one-hot vs ncut max {worst_onehot:.2e} (≤ {C6_TOL:e}), \
                 gradient relative error max {worst_rel:.2e} (≤ {C6_FD_REL_TOL:e})"
            ),
        )
    })
}

fn c7_soft_optimizer_sanity() -> Outcome {
    timed(C7_TIME, || {
        let hg = bridged_triangles();
        let g = Clique.expand(&hg).graph;
        let mut hits = 0;
        let mut cuts = Vec::new();
        for seed in 0..C7_SEEDS {
            let cfg = SoftcutConfig {
                seed,
                ..SoftcutConfig::default()
            };
            let out = optimize_soft(&g, 2, &cfg).map_err(|e| e.to_string())?;
            let cut = hyperedge_cut(&hg, &harden(&out.assignment)).unwrap();
            hits += usize::from(cut == 1);
            cuts.push(cut);
        }
        let z = Array2::zeros((6, 2));
        let norm = soft_ncut_grad(&g, &z, 0.0).unwrap().iter().map(|x| x * x).sum::<f64>().sqrt();
        let stalled = optimize_soft(
            &g,
            2,
            &SoftcutConfig {
                init_scale: 0.0,
                ..SoftcutConfig::default()
            },
        )
        .map_err(|e| e.to_string())?;
        let stall_ok = (stalled.best_loss - 1.0).abs() <= 1e-12 && stalled.stopped_early;
        check(
            hits >= C7_MIN_HITS && norm < C7_GRAD_MAX && stall_ok,
            format!(
                "cut 1 in {hits}/{C7_SEEDS} seeds (need {C7_MIN_HITS}), cuts {cuts:?}; zero-init gradient norm {norm:.1e} \
                 (< {C7_GRAD_MAX:e}), zero-init run loss {:.12} after {} epochs",
                stalled.best_loss,
                stalled.history.len()
            ),
        )
    })
}

fn c8_net_model_conservation() -> Outcome {
    timed(C8_TIME, || {
        let mut rng = BenchRng::seed_from_u64(8);
        let mut worst: f64 = 0.0;
        let mut star_bad = 0;
        for _ in 0..C8_GRAPHS {
            let n = 4 + rng.below(40);
            let m = 1 + rng.below(60);
            let hg = random_hypergraph(&mut rng, n, m, 8);
            for model in [&Clique as &dyn NetModel, &Fanout] {
                let w = model.expand(&hg).graph.total_edge_weight();
                worst = worst.max((w - m as f64).abs());
            }
            let x = Star.expand(&hg);
            let g = &x.graph;
            let spokes_ok = hg.nets().iter().enumerate().all(|(e, net)| {
                let hub = n + e;
                g.node_weights()[hub] == 0 && g.neighbors(hub).len() == net.len()
            });
            if g.num_nodes() != n + m
                || x.star_nodes.len() != m
                || g.num_edges() != hg.total_pins()
                || g.node_weights()[..n].iter().any(|&w| w == 0)
                || !spokes_ok
            {
                star_bad += 1;
            }
        }
        check(
            worst <= C8_TOL && star_bad == 0,
            format!("clique/fanout max |weight - nets| {worst:.2e} (≤ {C8_TOL:e}); star shape violations {star_bad}/{C8_GRAPHS}"),
        )
    })
}

fn c9_format_round_trips() -> Outcome {
    let mut failures = Vec::new();
    for name in ["golden.hgr", "golden_weighted.hgr"] {
        let text = fixture(name);
        match parse_hgr(&text).and_then(|hg| emit_hgr(&hg)) {
            Ok(out) if out == text => {}
            Ok(_) => failures.push(format!("{name}: not bit-exact")),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let canon = parse_hgr(&fixture("noncanonical.hgr")).and_then(|hg| emit_hgr(&hg));
    if canon.as_deref().ok() != Some(fixture("golden.hgr").as_str()) {
        failures.push("noncanonical.hgr does not canonicalize to golden.hgr".into());
    }
    let part = fixture("golden.part");
    match parse_partition(&part) {
        Ok(pf) if emit_partition(&pf.assignment) == part && !pf.label_gap => {}
        _ => failures.push("golden.part: not bit-exact".into()),
    }

    let mut rng = BenchRng::seed_from_u64(9);
    for _ in 0..20 {
        let hg = random_hypergraph(&mut rng, 30, 40, 6);
        let once = emit_hgr(&hg).unwrap();
        let twice = emit_hgr(&parse_hgr(&once).unwrap()).unwrap();
        if once != twice || parse_hgr(&once).unwrap() != hg {
            failures.push("random .hgr round trip".into());
        }
        let pa = random_balanced_partition(30, 3, &mut rng).unwrap();
        if parse_partition(&emit_partition(&pa)).unwrap().assignment != pa {
            failures.push("random partition round trip".into());
        }
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut bundles = 0;
    for (i, k) in [2usize, 2, 3, 4].into_iter().enumerate() {
        let params = GeneratorParams::new(
            600,
            k,
            SizeDistribution::example_ndv(),
            SizeDistribution::example_gdv(),
        )
        .with_seed(i as u64);
        let b = generate_planted(&params).map_err(|e| e.to_string())?;
        let name = format!("b{i}");
        write_bundle(dir.path(), &name, &b).map_err(|e| e.to_string())?;
        match load_bundle(dir.path(), &name) {
            Ok(l) if l.hypergraph == b.hypergraph && l.meta.planted_cut <= l.meta.budget => bundles += 1,
            Ok(_) => failures.push(format!("bundle {name}: reload mismatch")),
            Err(e) => failures.push(format!("bundle {name}: {e}")),
        }
        let path = dir.path().join(format!("{name}.copy.part"));
        write_partition(&b.planted, &path).unwrap();
        if read_partition(&path).unwrap().assignment != b.planted {
            failures.push(format!("bundle {name}: partition file round trip"));
        }
    }
    check(
        failures.is_empty(),
        format!("golden fixtures, 20 random round trips, {bundles}/4 bundles self-consistent; failures {failures:?}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("C1 generator fidelity", c1_generator_fidelity),
        ("C2 Erdős–Rényi statistics", c2_erdos_renyi),
        ("C3 2-way known upper bound", c3_known_upper_bound),
        ("C4 multi-way planted partitions", c4_multiway_planted),
        ("C5 FM vs exhaustive search", c5_fm_vs_brute_force),
        ("C6 soft loss exactness", c6_soft_loss_exactness),
        ("C7 soft optimizer sanity", c7_soft_optimizer_sanity),
        ("C8 net-model conservation", c8_net_model_conservation),
        ("C9 format round trips", c9_format_round_trips),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(d) => println!("PASS  {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL  {name}: {d}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
