//! `hgbench`: generate, expand, partition and evaluate hypergraph benchmarks.
//!
//! Every command is deterministic for a given `--seed`. Reports go to stdout
//! as JSON unless `--report` names a file.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use hgbench_core::distributions::{cleanup_netlist, extract_distributions, SizeDistribution};
use hgbench_core::generator::{
    generate_erdos_renyi, generate_planted, CutSplit, GeneratedBenchmark, GeneratorParams,
};
use hgbench_core::harness::bundle::{load_bundle, write_bundle, BundleMeta};
use hgbench_core::harness::edgelist::{emit_edge_list, parse_edge_list};
use hgbench_core::harness::external::{run_external_partitioner, ExternalCommand, BINARY_ENV};
use hgbench_core::harness::hgr::{parse_hgr, parse_hgr_raw};
use hgbench_core::harness::partfile::{read_partition, write_partition};
use hgbench_core::harness::report::{evaluate, graph_stats, hypergraph_stats, EvalReport};
use hgbench_core::netmodel::{net_model, NetModelRegistry};
use hgbench_core::partition::{
    brute_force_min_cut, fm_bipartition, random_balanced_partition, FmConfig, PartitionerOptions,
    PartitionerRegistry,
};
use hgbench_core::rng::{derive_seed, BenchRng};
use hgbench_core::softcut::{harden, optimize_soft, SoftcutConfig};
use hgbench_core::{Hypergraph, PartitionAssignment, TOOL_VERSION};

#[derive(Parser)]
#[command(name = "hgbench", version, about = "Hypergraph partitioning benchmark toolkit")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate planted-partition benchmark bundles.
    Gen(GenArgs),
    /// Generate an Erdős–Rényi graph as an edge list.
    Er(ErArgs),
    /// Clean an .hgr and write its net-size and gate-pin distributions.
    ExtractDist(ExtractArgs),
    /// Expand an .hgr into a weighted edge list.
    Expand(ExpandArgs),
    /// FM bipartition refinement.
    PartitionFm(FmArgs),
    /// Soft normalized-cut optimization on a net-model expansion.
    Softcut(SoftcutArgs),
    /// Exhaustive minimum cut for tiny inputs.
    Brute(BruteArgs),
    /// Score a partition: hyperedge cut, balancedness, optional normalized cut.
    Eval(EvalArgs),
    /// Node, net and path statistics plus NDV/GDV histograms.
    Stats(StatsArgs),
    /// Run an external hMETIS-compatible partitioner.
    RunExt(RunExtArgs),
    /// Run any registered partitioner by name.
    Partition(PartitionArgs),
    /// List registered partitioners and net models.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitArg {
    Strict,
    Inclusive,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long, default_value_t = 2)]
    parts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Net-size distribution file (`size probability` lines).
    #[arg(long, requires = "gdv")]
    ndv: Option<PathBuf>,
    /// Gate-pin distribution file.
    #[arg(long, requires = "ndv")]
    gdv: Option<PathBuf>,
    /// Take both distributions from an existing .hgr instead.
    #[arg(long, conflicts_with_all = ["ndv", "gdv", "synthetic_example"])]
    from_hgr: Option<PathBuf>,
    /// Use the bundled synthetic example distributions.
    #[arg(long, conflicts_with_all = ["ndv", "gdv"])]
    synthetic_example: bool,
    #[arg(long, default_value_t = GeneratorParams::DEFAULT_RENT_T)]
    rent_t: f64,
    #[arg(long, default_value_t = GeneratorParams::DEFAULT_RENT_P)]
    rent_p: f64,
    #[arg(long, value_enum, default_value_t = SplitArg::Strict)]
    cut_split: SplitArg,
    /// Skip FM refinement of 2-way bundles.
    #[arg(long)]
    no_refine: bool,
    /// Number of bundles; bundle `i` uses a seed derived from `--seed` and `i`.
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value = "bench")]
    name: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ErArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge-list output file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractArgs {
    hgr: PathBuf,
    /// Output directory for `<name>.ndv` and `<name>.gdv`.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "extracted")]
    name: String,
}

#[derive(Args)]
struct ExpandArgs {
    hgr: PathBuf,
    #[arg(long)]
    model: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FmArgs {
    hgr: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    /// Starting partition; a seeded random balanced split otherwise.
    #[arg(long)]
    initial: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SoftcutArgs {
    hgr: PathBuf,
    #[arg(long, default_value_t = 2)]
    parts: usize,
    #[arg(long, default_value = "clique")]
    model: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent runs; the lowest final loss wins (lowest index on ties).
    #[arg(long, default_value_t = 1)]
    seeds: usize,
    #[arg(long, default_value_t = 0.0)]
    balance_weight: f64,
    #[arg(long, default_value_t = 1e-2)]
    learning_rate: f64,
    #[arg(long, default_value_t = 5000)]
    epochs: usize,
    #[arg(long, default_value_t = 5)]
    patience: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BruteArgs {
    hgr: PathBuf,
    #[arg(long, default_value_t = 2)]
    parts: usize,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Hypergraph to score; alternatively `--bundle DIR/NAME`.
    #[arg(required_unless_present = "bundle")]
    hgr: Option<PathBuf>,
    #[arg(long, conflicts_with = "hgr")]
    bundle: Option<PathBuf>,
    /// Partition file; for bundles the known partition is used when absent.
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Net model for the normalized cut. Without it no normalized cut is reported.
    #[arg(long)]
    model: Option<String>,
    /// Demand a normalized cut; requires `--model`.
    #[arg(long, requires = "model")]
    ncut: bool,
    #[arg(long, default_value = "given")]
    partitioner: String,
}

#[derive(Args)]
struct StatsArgs {
    /// Hypergraph in .hgr format.
    #[arg(required_unless_present = "edge_list")]
    hgr: Option<PathBuf>,
    /// Weighted edge list instead of a hypergraph.
    #[arg(long, conflicts_with = "hgr")]
    edge_list: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write NDV/GDV histograms as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct RunExtArgs {
    hgr: PathBuf,
    #[arg(long, default_value_t = 2)]
    parts: usize,
    /// hMETIS UBfactor, passed through unchanged.
    #[arg(long, default_value_t = 5)]
    ubfactor: u32,
    #[arg(long, env = BINARY_ENV)]
    bin: Option<PathBuf>,
    /// Command template with `{bin} {input} {k} {ubfactor}` placeholders.
    #[arg(long)]
    template: Option<String>,
}

#[derive(Args)]
struct PartitionArgs {
    hgr: PathBuf,
    #[arg(long)]
    algo: String,
    #[arg(long, default_value_t = 2)]
    parts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[arg(long, default_value = "clique")]
    model: String,
    #[arg(long, default_value_t = 0.0)]
    balance_weight: f64,
    #[arg(long, env = BINARY_ENV)]
    bin: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let value = match cli.command {
        Command::Gen(a) => cmd_gen(a)?,
        Command::Er(a) => cmd_er(a)?,
        Command::ExtractDist(a) => cmd_extract(a)?,
        Command::Expand(a) => cmd_expand(a)?,
        Command::PartitionFm(a) => cmd_fm(a)?,
        Command::Softcut(a) => cmd_softcut(a)?,
        Command::Brute(a) => cmd_brute(a)?,
        Command::Eval(a) => cmd_eval(a)?,
        Command::Stats(a) => cmd_stats(a)?,
        Command::RunExt(a) => cmd_run_ext(a)?,
        Command::Partition(a) => cmd_partition(a)?,
        Command::List => json!({
            "partitioners": PartitionerRegistry::with_builtins().names(),
            "net_models": NetModelRegistry::with_builtins().names(),
        }),
    };
    let text = serde_json::to_string_pretty(&value)? + "\n";
    match cli.report {
        Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_hgr(path: &Path) -> Result<Hypergraph> {
    parse_hgr(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_dist(path: &Path) -> Result<SizeDistribution> {
    SizeDistribution::parse(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn save_partition(pa: &PartitionAssignment, out: Option<&Path>) -> Result<()> {
    if let Some(path) = out {
        write_partition(pa, path).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn eval_report(
    seed: Option<u64>,
    params: serde_json::Value,
    hg: &Hypergraph,
    pa: &PartitionAssignment,
    graph_id: &str,
    partitioner: &str,
    wall_time_ms: f64,
) -> Result<serde_json::Value> {
    let mut report = EvalReport::new(seed, params);
    report.push(evaluate(hg, pa, None, graph_id, partitioner, wall_time_ms)?);
    Ok(serde_json::to_value(report)?)
}

fn graph_id(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn cmd_gen(a: GenArgs) -> Result<serde_json::Value> {
    let (ndv, gdv, source) = match (&a.ndv, &a.gdv, &a.from_hgr) {
        (Some(n), Some(g), _) => (load_dist(n)?, load_dist(g)?, "files"),
        (_, _, Some(h)) => {
            let raw = parse_hgr_raw(&read_text(h)?)?;
            let (n, g) = extract_distributions(&cleanup_netlist(&raw)?)?;
            (n, g, "hgr")
        }
        _ if a.synthetic_example => (
            SizeDistribution::example_ndv(),
            SizeDistribution::example_gdv(),
            "synthetic-example",
        ),
        _ => bail!("give --ndv and --gdv, --from-hgr, or --synthetic-example"),
    };
    let mut base = GeneratorParams::new(a.nodes, a.parts, ndv, gdv);
    base.rent_t = a.rent_t;
    base.rent_p = a.rent_p;
    base.refine = !a.no_refine;
    base.cut_split = match a.cut_split {
        SplitArg::Strict => CutSplit::Strict,
        SplitArg::Inclusive => CutSplit::Inclusive,
    };
    base.validate()?;

    let seeds: Vec<u64> = if a.count == 1 {
        vec![a.seed]
    } else {
        (0..a.count as u64).map(|i| derive_seed(a.seed, i)).collect()
    };
    let results: Vec<Result<GeneratedBenchmark>> = seeds
        .par_iter()
        .map(|&s| Ok(generate_planted(&base.clone().with_seed(s))?))
        .collect();
    let mut metas = Vec::with_capacity(results.len());
    for (i, r) in results.into_iter().enumerate() {
        let b = r?;
        let name = if a.count == 1 { a.name.clone() } else { format!("{}-{i}", a.name) };
        let paths = write_bundle(&a.out, &name, &b)?;
        let mut meta = serde_json::to_value(BundleMeta::from_benchmark(&b))?;
        meta["hgr"] = json!(paths.hgr);
        metas.push(meta);
    }
    Ok(json!({ "tool_version": TOOL_VERSION, "distribution_source": source, "bundles": metas }))
}

fn cmd_er(a: ErArgs) -> Result<serde_json::Value> {
    let g = generate_erdos_renyi(a.nodes, a.p, a.seed)?;
    if let Some(out) = &a.out {
        std::fs::write(out, emit_edge_list(&g))?;
    }
    Ok(json!({
        "tool_version": TOOL_VERSION,
        "seed": a.seed,
        "params": { "nodes": a.nodes, "p": a.p },
        "stats": graph_stats(&g, a.seed)?,
    }))
}

fn cmd_extract(a: ExtractArgs) -> Result<serde_json::Value> {
    let raw = parse_hgr_raw(&read_text(&a.hgr)?)?;
    let hg = cleanup_netlist(&raw)?;
    let (ndv, gdv) = extract_distributions(&hg)?;
    std::fs::create_dir_all(&a.out)?;
    let ndv_path = a.out.join(format!("{}.ndv", a.name));
    let gdv_path = a.out.join(format!("{}.gdv", a.name));
    std::fs::write(&ndv_path, ndv.to_text())?;
    std::fs::write(&gdv_path, gdv.to_text())?;
    Ok(json!({
        "tool_version": TOOL_VERSION,
        "input": { "nodes": raw.num_nodes(), "nets": raw.nets.len() },
        "clean": { "nodes": hg.num_nodes(), "nets": hg.num_nets() },
        "ndv": ndv_path,
        "gdv": gdv_path,
    }))
}

fn cmd_expand(a: ExpandArgs) -> Result<serde_json::Value> {
    let hg = load_hgr(&a.hgr)?;
    let x = net_model(&a.model)?.expand(&hg);
    std::fs::write(&a.out, emit_edge_list(&x.graph))?;
    Ok(json!({
        "tool_version": TOOL_VERSION,
        "model": x.model,
        "nodes": x.graph.num_nodes(),
        "edges": x.graph.num_edges(),
        "total_edge_weight": x.graph.total_edge_weight(),
        "star_nodes": x.star_nodes.len(),
    }))
}

fn cmd_fm(a: FmArgs) -> Result<serde_json::Value> {
    let hg = load_hgr(&a.hgr)?;
    let cfg = FmConfig {
        epsilon: a.epsilon,
        restarts: a.restarts,
        seed: a.seed,
        ..FmConfig::default()
    };
    let initial = match &a.initial {
        Some(p) => read_partition(p)?.assignment,
        None => random_balanced_partition(hg.num_nodes(), 2, &mut BenchRng::seed_from_u64(a.seed))?,
    };
    let start = Instant::now();
    let (pa, _) = fm_bipartition(&hg, &initial, &cfg)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    save_partition(&pa, a.out.as_deref())?;
    eval_report(Some(a.seed), serde_json::to_value(&cfg)?, &hg, &pa, &graph_id(&a.hgr), "fm", ms)
}

fn cmd_softcut(a: SoftcutArgs) -> Result<serde_json::Value> {
    if a.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let hg = load_hgr(&a.hgr)?;
    let x = net_model(&a.model)?.expand(&hg);
    let base = SoftcutConfig {
        learning_rate: a.learning_rate,
        max_epochs: a.epochs,
        patience: a.patience,
        balance_weight: a.balance_weight,
        seed: a.seed,
        ..SoftcutConfig::default()
    };
    base.validate()?;
    let start = Instant::now();
    let runs: Vec<_> = (0..a.seeds as u64)
        .into_par_iter()
        .map(|i| {
            let seed = if a.seeds == 1 { a.seed } else { derive_seed(a.seed, i) };
            optimize_soft(&x.graph, a.parts, &SoftcutConfig { seed, ..base.clone() }).map(|o| (seed, o))
        })
        .collect::<Result<_, _>>()?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let (best_i, (best_seed, best)) = runs
        .iter()
        .enumerate()
        .min_by(|(i, (_, x)), (j, (_, y))| x.best_loss.total_cmp(&y.best_loss).then(i.cmp(j)))
        .expect("at least one run");
    let pa = harden(&best.assignment).truncated(hg.num_nodes());
    save_partition(&pa, a.out.as_deref())?;
    let mut report = EvalReport::new(
        Some(a.seed),
        json!({ "config": base, "model": x.model, "seeds": a.seeds }),
    );
    report.push(evaluate(&hg, &pa, None, &graph_id(&a.hgr), "softcut", ms)?);
    let mut v = serde_json::to_value(report)?;
    v["best_run"] = json!({
        "index": best_i,
        "seed": best_seed,
        "loss": best.best_loss,
        "epoch": best.best_epoch,
        "stopped_early": best.stopped_early,
    });
    v["losses"] = json!(runs.iter().map(|(_, o)| o.best_loss).collect::<Vec<_>>());
    Ok(v)
}

fn cmd_brute(a: BruteArgs) -> Result<serde_json::Value> {
    let hg = load_hgr(&a.hgr)?;
    let start = Instant::now();
    let (pa, _) = brute_force_min_cut(&hg, a.parts, a.epsilon)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    save_partition(&pa, a.out.as_deref())?;
    eval_report(None, json!({ "epsilon": a.epsilon, "k": a.parts }), &hg, &pa, &graph_id(&a.hgr), "brute", ms)
}

fn cmd_eval(a: EvalArgs) -> Result<serde_json::Value> {
    let (hg, known, id, extra) = match (&a.hgr, &a.bundle) {
        (_, Some(b)) => {
            let dir = b.parent().unwrap_or(Path::new("."));
            let name = b.file_name().context("bundle path needs a name")?.to_string_lossy();
            let bundle = load_bundle(dir, &name)?;
            let known = bundle.refined.clone().unwrap_or(bundle.planted.clone());
            let meta = serde_json::to_value(&bundle.meta)?;
            (bundle.hypergraph, Some(known), name.into_owned(), meta)
        }
        (Some(h), None) => (load_hgr(h)?, None, graph_id(h), json!({})),
        (None, None) => unreachable!("clap requires one input"),
    };
    let pa = match (&a.partition, known) {
        (Some(p), _) => read_partition(p)?.assignment,
        (None, Some(k)) => k,
        (None, None) => bail!("--partition is required unless --bundle is given"),
    };
    let model = a.model.as_deref().map(net_model).transpose()?;
    let mut report = EvalReport::new(extra.get("seed").and_then(|s| s.as_u64()), json!({ "bundle": extra }));
    report.push(evaluate(&hg, &pa, model.as_deref(), &id, &a.partitioner, 0.0)?);
    Ok(serde_json::to_value(report)?)
}

fn cmd_stats(a: StatsArgs) -> Result<serde_json::Value> {
    let stats = match (&a.hgr, &a.edge_list) {
        (Some(h), _) => hypergraph_stats(&load_hgr(h)?, a.seed)?,
        (None, Some(e)) => graph_stats(&parse_edge_list(&read_text(e)?)?, a.seed)?,
        (None, None) => unreachable!("clap requires one input"),
    };
    if let Some(csv) = &a.csv {
        std::fs::write(csv, stats.histogram_csv())?;
    }
    let mut v = serde_json::to_value(&stats)?;
    v["seed"] = json!(a.seed);
    Ok(v)
}

fn cmd_run_ext(a: RunExtArgs) -> Result<serde_json::Value> {
    let hg = load_hgr(&a.hgr)?;
    let mut cmd = ExternalCommand {
        binary: a.bin,
        ..Default::default()
    };
    if let Some(t) = a.template {
        cmd.template = t;
    }
    let run = run_external_partitioner(&a.hgr, a.parts, a.ubfactor, &cmd)?;
    if run.assignment.len() != hg.num_nodes() {
        bail!(
            "external partition has {} entries, hypergraph has {} nodes",
            run.assignment.len(),
            hg.num_nodes()
        );
    }
    eval_report(
        None,
        json!({ "ubfactor": a.ubfactor, "k": a.parts, "binary": cmd.resolve_binary() }),
        &hg,
        &run.assignment,
        &graph_id(&a.hgr),
        "external",
        run.wall_time_ms,
    )
}

fn cmd_partition(a: PartitionArgs) -> Result<serde_json::Value> {
    let hg = load_hgr(&a.hgr)?;
    let opts = PartitionerOptions {
        seed: a.seed,
        epsilon: a.epsilon,
        restarts: a.restarts,
        net_model: a.model.clone(),
        softcut: SoftcutConfig {
            balance_weight: a.balance_weight,
            ..SoftcutConfig::default()
        },
        external: ExternalCommand {
            binary: a.bin,
            ..Default::default()
        },
        ..PartitionerOptions::default()
    };
    let p = PartitionerRegistry::with_builtins().create(&a.algo, &opts)?;
    let start = Instant::now();
    let pa = p.partition(&hg, a.parts)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    save_partition(&pa, a.out.as_deref())?;
    eval_report(
        Some(a.seed),
        json!({ "algo": a.algo, "k": a.parts, "epsilon": a.epsilon, "restarts": a.restarts, "model": a.model }),
        &hg,
        &pa,
        &graph_id(&a.hgr),
        p.name(),
        ms,
    )
}
