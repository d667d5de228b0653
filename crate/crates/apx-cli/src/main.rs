//! `apx` — generate graphs, run the approximate-APSP pipeline, verify the
//! output against the exact oracle, and benchmark scaling.

use anyhow::{bail, Context, Result};
use apx_core::estimate::{EstimateMatrix, InitVariant, LowDegBackend};
use apx_core::generate::{generate, Family, GeneratorSpec};
use apx_core::graph::Graph;
use apx_core::oracle::{check_guarantees, exact_apsp, verify_report_json};
use apx_core::pipeline::{self, RunConfig};
use apx_core::pivots::PivotMode;
use clap::{Args, Parser, Subcommand};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "apx",
    about = "2-approximate all-pairs shortest paths for distant vertex pairs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph as an edge-list file.
    Gen(GenArgs),
    /// Run the pipeline on a graph; write the estimate matrix and a report.
    Run(RunArgs),
    /// Check a matrix dump against the exact oracle; exit 0 iff clean.
    Verify(VerifyArgs),
    /// Run the pipeline across a size grid and fit count scaling.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// gnp | path | grid | barbell | path-with-chords | power-law
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    /// Edge probability (gnp).
    #[arg(long, default_value_t = 0.05)]
    p: f64,
    /// Extra random chords (path-with-chords).
    #[arg(long, default_value_t = 0)]
    chords: usize,
    /// Degree exponent (power-law).
    #[arg(long, default_value_t = 2.5)]
    exponent: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output edge-list path.
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct PipelineFlags {
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    c_deg: u32,
    #[arg(long, default_value_t = 4)]
    c_ball: u32,
    #[arg(long, default_value_t = 256)]
    exact_fallback_cutoff: usize,
    /// Run the sampling pipeline even below the cutoff.
    #[arg(long)]
    force_pipeline: bool,
    /// exact | additive2 | pessimistic21
    #[arg(long, default_value = "additive2")]
    init_variant: InitVariant,
    /// exact | bk
    #[arg(long, default_value = "exact")]
    backend_lowdeg: LowDegBackend,
    /// Low-degree step threshold override (0 disables the step).
    #[arg(long)]
    tau_lowdeg: Option<u32>,
    /// fast | reference
    #[arg(long, default_value = "fast")]
    pivot_mode: PivotMode,
    /// Keep per-phase matrix snapshots (debugging; memory-heavy).
    #[arg(long)]
    snapshot_phases: bool,
    /// Worker threads (default: APX_THREADS or all cores).
    #[arg(long)]
    threads: Option<usize>,
}

impl PipelineFlags {
    fn to_config(&self) -> RunConfig {
        let threads = self.threads.or_else(|| {
            std::env::var("APX_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        });
        RunConfig {
            k: self.k,
            seed: self.seed,
            c_deg: self.c_deg,
            c_ball: self.c_ball,
            exact_fallback_cutoff: self.exact_fallback_cutoff,
            force_pipeline: self.force_pipeline,
            init_variant: self.init_variant,
            lowdeg_backend: self.backend_lowdeg,
            tau_lowdeg: self.tau_lowdeg,
            pivot_mode: self.pivot_mode,
            snapshot_phases: self.snapshot_phases,
            threads,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Input edge-list file.
    #[arg(long, short)]
    graph: PathBuf,
    /// Output matrix dump; a JSON sidecar lands next to it.
    #[arg(long, short)]
    out: PathBuf,
    /// Where to write the run report JSON (default: stdout).
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    flags: PipelineFlags,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, short)]
    graph: PathBuf,
    /// Matrix dump produced by `apx run`.
    #[arg(long, short)]
    matrix: PathBuf,
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Where to write the verify report JSON (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated ascending sizes, e.g. 512,1024,2048.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Comma-separated k values; "log" means floor(log2 n) per size.
    #[arg(long = "ks", value_delimiter = ',', default_value = "2,4,log")]
    ks: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    seeds: Vec<u64>,
    /// Graph family for the sweep.
    #[arg(long, default_value = "gnp")]
    family: Family,
    /// gnp edge probability is scaled as p = degree / n.
    #[arg(long, default_value_t = 10.0)]
    degree: f64,
    /// Append JSON records here.
    #[arg(long, short)]
    out: PathBuf,
    #[command(flatten)]
    flags: PipelineFlags,
}

fn main() {
    if let Err(e) = dispatch() {
        eprintln!("error: {e:#}");
        std::process::exit(2);
    }
}

fn dispatch() -> Result<()> {
    match Cli::parse().command {
        Command::Gen(args) => cmd_gen(args),
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => match cmd_verify(args)? {
            true => Ok(()),
            false => std::process::exit(1),
        },
        Command::Bench(args) => cmd_bench(args),
    }
}

fn load_graph(path: &Path) -> Result<Graph> {
    let file = File::open(path).with_context(|| format!("open {}", path.display()))?;
    let (g, dropped) = Graph::read_edge_list(BufReader::new(file))?;
    if dropped.duplicates + dropped.self_loops > 0 {
        eprintln!(
            "note: dropped {} duplicate edge(s), {} self-loop(s)",
            dropped.duplicates, dropped.self_loops
        );
    }
    Ok(g)
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let spec = GeneratorSpec {
        family: args.family,
        n: args.n,
        p: args.p,
        chords: args.chords,
        exponent: args.exponent,
        seed: args.seed,
    };
    let g = generate(&spec)?;
    let file = File::create(&args.out).with_context(|| format!("create {}", args.out.display()))?;
    let mut w = BufWriter::new(file);
    g.write_edge_list(&mut w)?;
    w.flush()?;
    eprintln!(
        "wrote {} vertices, {} edges to {}",
        g.vertex_count(),
        g.edge_count(),
        args.out.display()
    );
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let cfg = args.flags.to_config();
    if cfg.k < 2 || cfg.k > pipeline::max_k(g.vertex_count()) {
        bail!(
            "invalid k = {}: valid range is 2..={} for n = {}",
            cfg.k,
            pipeline::max_k(g.vertex_count()),
            g.vertex_count()
        );
    }
    let out = pipeline::run(&g, &cfg)?;

    let file = File::create(&args.out).with_context(|| format!("create {}", args.out.display()))?;
    let mut w = BufWriter::new(file);
    out.est.dump(&mut w)?;
    w.flush()?;

    let sidecar_path = sidecar(&args.out);
    let sidecar_json = serde_json::json!({
        "n": out.report.n,
        "m": out.report.m,
        "k": out.report.k,
        "seed": out.report.seed,
        "matrix_digest": out.report.matrix_digest,
        "exact_fallback": out.report.exact_fallback,
        "config": out.report.config,
    });
    std::fs::write(&sidecar_path, serde_json::to_string_pretty(&sidecar_json)?)?;

    let report_json = out.report.to_json();
    match &args.report {
        Some(path) => std::fs::write(path, report_json)?,
        None => println!("{report_json}"),
    }
    eprintln!(
        "matrix -> {} (digest {}), sidecar -> {}",
        args.out.display(),
        out.report.matrix_digest,
        sidecar_path.display()
    );
    Ok(())
}

fn sidecar(matrix_path: &Path) -> PathBuf {
    let mut s = matrix_path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn cmd_verify(args: VerifyArgs) -> Result<bool> {
    let g = load_graph(&args.graph)?;
    let file =
        File::open(&args.matrix).with_context(|| format!("open {}", args.matrix.display()))?;
    let est = EstimateMatrix::load(BufReader::new(file))?;
    if est.n() != g.vertex_count() {
        bail!(
            "dimension mismatch: matrix n = {}, graph n = {}",
            est.n(),
            g.vertex_count()
        );
    }
    let exact = exact_apsp(&g);
    let stretch = check_guarantees(&est.snapshot(), &exact, args.k, None)?;
    let json = verify_report_json(&stretch, None);
    match &args.out {
        Some(path) => std::fs::write(path, &json)?,
        None => println!("{json}"),
    }
    Ok(stretch.is_clean())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    if args.sizes.is_empty() {
        bail!("need at least one size");
    }
    if args.sizes.windows(2).any(|w| w[0] >= w[1]) {
        bail!("sizes must be strictly ascending");
    }
    let mut out_file = File::options()
        .create(true)
        .append(true)
        .open(&args.out)
        .with_context(|| format!("open {}", args.out.display()))?;

    // counts[k-label] -> (ln n, ln counts) points
    let mut points: std::collections::BTreeMap<String, Vec<(f64, f64)>> = Default::default();
    for &n in &args.sizes {
        let mut ks = Vec::new();
        for label in &args.ks {
            if label == "log" {
                ks.push(("log".to_string(), (n.max(2) as u64).ilog2()));
            } else {
                let k: u32 = label.parse().with_context(|| format!("bad k {label:?}"))?;
                ks.push((label.clone(), k));
            }
        }
        for &seed in &args.seeds {
            let spec = GeneratorSpec {
                family: args.family,
                n,
                p: (args.degree / n as f64).min(1.0),
                chords: 0,
                exponent: 2.5,
                seed,
            };
            let g = generate(&spec)?;
            let mut flags = args.flags.clone();
            flags.seed = seed;
            let mut cfg = flags.to_config();
            cfg.force_pipeline = true;
            let prepared = pipeline::prepare(&g, &cfg)?;
            for (label, k) in &ks {
                if *k < 2 || *k > pipeline::max_k(n) {
                    continue;
                }
                let run_out = prepared.finish(*k)?;
                let counts =
                    run_out.report.total_relax_attempts + run_out.report.total_edges_scanned;
                let wall: f64 = run_out.report.phases.iter().map(|p| p.wall_ms).sum();
                let record = serde_json::json!({
                    "n": n,
                    "k": k,
                    "k_label": label,
                    "seed": seed,
                    "relax_attempts": run_out.report.total_relax_attempts,
                    "edges_scanned": run_out.report.total_edges_scanned,
                    "counts": counts,
                    "wall_ms_sum": wall,
                    "phases": run_out.report.phases.iter().map(|p| {
                        serde_json::json!({"name": p.name, "relax": p.relax_attempts,
                                           "edges": p.edges_scanned, "wall_ms": p.wall_ms})
                    }).collect::<Vec<_>>(),
                });
                writeln!(out_file, "{record}")?;
                points
                    .entry(label.clone())
                    .or_default()
                    .push(((n as f64).ln(), (counts as f64).ln()));
            }
        }
    }

    let mut summary = serde_json::Map::new();
    for (label, pts) in &points {
        let distinct: std::collections::BTreeSet<u64> = pts.iter().map(|p| p.0.to_bits()).collect();
        if distinct.len() < 2 {
            summary.insert(label.clone(), serde_json::json!({"slope": null}));
            continue;
        }
        let slope = least_squares_slope(pts);
        summary.insert(
            label.clone(),
            serde_json::json!({"slope": slope, "points": pts.len()}),
        );
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::json!({ "slopes": summary }))?
    );
    Ok(())
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
