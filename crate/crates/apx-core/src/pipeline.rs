//! Full-run orchestration: initialization, the low-degree step, sampling,
//! pivot/ball tables, closeness enforcement, the base case, the per-level
//! iterations, and the final wide step.
//!
//! Phases run in a fixed order and only ever decrease estimates. Inside a
//! phase, reads come from the phase-start snapshot and writes merge through
//! atomic minimum, so a run is reproducible for any thread count.

use crate::closeness::{build_pivot_arcs, ensure_closeness, update_pass};
use crate::dist::{Dist, Vertex, INFINITY};
use crate::error::{Error, Result};
use crate::estimate::{
    ceil_log2, init_21_approx_into, low_degree_apsp, lowdeg_default_tau, seed_pivot_distances,
    DistMatrix, EstimateMatrix, InitVariant, LowDegBackend, PhaseWork,
};
use crate::graph::{FilterCache, Graph};
use crate::pivots::{
    compute_balls, compute_pivots, invert_pivots, level_degree_cap, BallLevel, PivotInverseLevel,
    PivotLevel, PivotMode, UNDEFINED,
};
use crate::sampling::{
    build_base_samples, build_hierarchy, level_scale, BaseSamples, SampleHierarchy,
};
use crate::sssp::{bfs_capped_into, BfsScratch, WeightedAdjacency};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use std::time::Instant;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    /// Guarantee knob: pairs at distance >= 18(floor(log2 k)+1) come out
    /// 2-approximate. 2 <= k <= floor(log2 n).
    pub k: u32,
    pub seed: u64,
    /// Multiplier in every degree cap.
    pub c_deg: u32,
    /// Multiplier in the documented ball-size bound (reporting only).
    pub c_ball: u32,
    /// Below this vertex count the run is exact unless forced.
    pub exact_fallback_cutoff: usize,
    pub force_pipeline: bool,
    pub init_variant: InitVariant,
    pub lowdeg_backend: LowDegBackend,
    /// Override for the low-degree step threshold (None = c_deg*sqrt(n)*log n).
    pub tau_lowdeg: Option<u32>,
    pub pivot_mode: PivotMode,
    /// Keep per-boundary matrix snapshots in the output.
    pub snapshot_phases: bool,
    /// Rayon pool size for `run` (None = ambient pool).
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k: 2,
            seed: 1,
            c_deg: 4,
            c_ball: 4,
            exact_fallback_cutoff: 256,
            force_pipeline: false,
            init_variant: InitVariant::Additive2,
            lowdeg_backend: LowDegBackend::ExactOnSubgraph,
            tau_lowdeg: None,
            pivot_mode: PivotMode::Fast,
            snapshot_phases: false,
            threads: None,
        }
    }
}

/// Largest accepted k for an n-vertex graph.
pub fn max_k(n: usize) -> u32 {
    ((n.max(2) as u64).ilog2()).max(2)
}

pub fn validate_k(k: u32, n: usize) -> Result<()> {
    if k < 2 || k > max_k(n) {
        return Err(Error::InvalidK { k, max: max_k(n) });
    }
    Ok(())
}

/// Guarantee threshold: pairs at distance >= this are 2-approximate.
pub fn guarantee_threshold(k: u32) -> u32 {
    18 * (k.max(2).ilog2() + 1)
}

/// Level at which the final wide step runs; -1 means it is skipped and the
/// per-level iterations run all the way down to level 0.
pub fn stop_level(levels: usize, k: u32) -> i64 {
    (levels as i64 - k.max(2).ilog2() as i64 - 1).max(-1)
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseRecord {
    pub name: String,
    pub wall_ms: f64,
    pub relax_attempts: u64,
    pub edges_scanned: u64,
    pub improved_entries: u64,
    pub digest: String,
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Anomalies {
    pub empty_levels: u32,
    pub undefined_pivots: u64,
    pub oversized_balls: u64,
    pub lowdeg_fell_back: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub n: usize,
    pub m: usize,
    pub k: u32,
    pub seed: u64,
    pub levels: usize,
    pub stop_level: i64,
    pub guarantee_threshold: u32,
    pub exact_fallback: bool,
    pub config: RunConfig,
    pub phases: Vec<PhaseRecord>,
    pub total_relax_attempts: u64,
    pub total_edges_scanned: u64,
    pub anomalies: Anomalies,
    pub matrix_digest: String,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Everything a run computed besides the matrix, for verification.
pub struct RunStructures {
    pub hierarchy: SampleHierarchy,
    pub base_samples: Option<BaseSamples>,
    pub pivots: Vec<PivotLevel>,
    pub balls: Vec<BallLevel>,
    pub inverse: Vec<PivotInverseLevel>,
}

pub struct RunOutput {
    pub est: EstimateMatrix,
    pub report: RunReport,
    /// Labeled matrix snapshots at phase boundaries (when requested).
    pub snapshots: Vec<(String, DistMatrix)>,
    /// Absent on the exact fallback path.
    pub structures: Option<Arc<RunStructures>>,
}

impl RunOutput {
    pub fn snapshot(&self, label: &str) -> Option<&DistMatrix> {
        self.snapshots
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, m)| m)
    }
}

struct Recorder {
    phases: Vec<PhaseRecord>,
    snapshots: Vec<(String, DistMatrix)>,
    keep_snapshots: bool,
}

impl Recorder {
    fn new(keep_snapshots: bool) -> Self {
        Recorder {
            phases: Vec::new(),
            snapshots: Vec::new(),
            keep_snapshots,
        }
    }

    fn record(
        &mut self,
        name: &str,
        started: Instant,
        work: PhaseWork,
        est: &EstimateMatrix,
        pre: &DistMatrix,
    ) {
        self.phases.push(PhaseRecord {
            name: name.to_string(),
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
            relax_attempts: work.relax_attempts,
            edges_scanned: work.edges_scanned,
            improved_entries: est.improved_since(pre),
            digest: format!("{:016x}", est.digest()),
        });
    }

    fn record_side(&mut self, name: &str, started: Instant, edges_scanned: u64) {
        self.phases.push(PhaseRecord {
            name: name.to_string(),
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
            relax_attempts: 0,
            edges_scanned,
            improved_entries: 0,
            digest: String::new(),
        });
    }

    fn snapshot(&mut self, label: &str, est: &EstimateMatrix) {
        if self.keep_snapshots {
            self.snapshots.push((label.to_string(), est.snapshot()));
        }
    }
}

/// The k-independent prefix of a run, reusable across different k.
pub struct PreparedRun<'g> {
    pub graph: &'g Graph,
    pub config: RunConfig,
    pub exact_fallback: bool,
    est: DistMatrix,
    structures: Option<Arc<RunStructures>>,
    level_filters: Vec<Arc<Graph>>,
    pivot_arcs: WeightedAdjacency,
    recorder: Recorder,
    anomalies: Anomalies,
}

/// Runs the whole pipeline under `cfg` (installing a private thread pool
/// when `cfg.threads` is set).
pub fn run(g: &Graph, cfg: &RunConfig) -> Result<RunOutput> {
    match cfg.threads {
        None => run_in_pool(g, cfg),
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Parse(format!("thread pool: {e}")))?;
            pool.install(|| run_in_pool(g, cfg))
        }
    }
}

fn run_in_pool(g: &Graph, cfg: &RunConfig) -> Result<RunOutput> {
    let prepared = prepare(g, cfg)?;
    prepared.finish(cfg.k)
}

/// Runs every phase before the k-dependent tail.
pub fn prepare<'g>(g: &'g Graph, cfg: &RunConfig) -> Result<PreparedRun<'g>> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::GraphTooSmall { n, min: 2 });
    }
    validate_k(cfg.k, n)?;
    let mut recorder = Recorder::new(cfg.snapshot_phases);
    let mut anomalies = Anomalies::default();

    if n < cfg.exact_fallback_cutoff && !cfg.force_pipeline {
        let started = Instant::now();
        let est = EstimateMatrix::new(n);
        let pre = est.snapshot();
        let work = init_21_approx_into(g, &est, InitVariant::Exact);
        recorder.record("exact_fallback", started, work, &est, &pre);
        return Ok(PreparedRun {
            graph: g,
            config: cfg.clone(),
            exact_fallback: true,
            est: est.snapshot(),
            structures: None,
            level_filters: Vec::new(),
            pivot_arcs: WeightedAdjacency::from_arcs(n, &[]),
            recorder,
            anomalies,
        });
    }

    let est = EstimateMatrix::new(n);

    // Initialization: d <= est <= 2d+1.
    let started = Instant::now();
    let pre = est.snapshot();
    let work = init_21_approx_into(g, &est, cfg.init_variant);
    recorder.record("init", started, work, &est, &pre);
    recorder.snapshot("init", &est);

    // Low-degree step: est <= 2d wherever a low-edge-degree shortest pathexists.
    let started = Instant::now();
    let pre = est.snapshot();
    let tau = cfg
        .tau_lowdeg
        .unwrap_or_else(|| lowdeg_default_tau(n, cfg.c_deg));
    let outcome = low_degree_apsp(g, &est, tau, cfg.lowdeg_backend, cfg.seed);
    anomalies.lowdeg_fell_back = outcome.fell_back_to_exact;
    recorder.record("low_degree", started, outcome.work, &est, &pre);
    recorder.snapshot("low_degree", &est);

    // Sampling.
    let started = Instant::now();
    let hierarchy = build_hierarchy(n, cfg.seed)?;
    let base_samples = if n >= 4 {
        Some(build_base_samples(n, cfg.seed)?)
    } else {
        None
    };
    anomalies.empty_levels = hierarchy.levels.iter().filter(|l| l.is_empty()).count() as u32;
    recorder.record_side("sampling", started, 0);

    // Pivots, balls, inverse index, per level.
    let levels = hierarchy.level_count();
    let mut pivots = Vec::with_capacity(levels);
    let mut balls = Vec::with_capacity(levels);
    let mut inverse = Vec::with_capacity(levels);
    let log_n = ceil_log2(n) as u64;
    for i in 0..levels {
        let started = Instant::now();
        let tau_i = level_degree_cap(n, i, cfg.c_deg);
        let (p, stats) = compute_pivots(g, &hierarchy, i, cfg.pivot_mode, tau_i)?;
        anomalies.undefined_pivots += p.pivot.iter().filter(|&&x| x == UNDEFINED).count() as u64;
        recorder.record_side(&format!("pivots_l{i}"), started, stats.edges_scanned);

        let started = Instant::now();
        let (b, stats) = compute_balls(g, &p);
        let cap = (cfg.c_ball as u64)
            .saturating_mul(level_scale(i))
            .saturating_mul(log_n);
        if (b.max_ball_size() as u64) > cap {
            anomalies.oversized_balls += 1;
        }
        recorder.record_side(&format!("balls_l{i}"), started, stats.edges_scanned);

        inverse.push(invert_pivots(&p));
        pivots.push(p);
        balls.push(b);
    }

    // Shared structures for the overlay passes.
    let pivot_arcs = build_pivot_arcs(n, &pivots);
    let mut filter_cache = FilterCache::new(Arc::new(g.clone()));
    let level_filters: Vec<Arc<Graph>> = (0..levels)
        .map(|i| filter_cache.get(level_degree_cap(n, i, cfg.c_deg)))
        .collect();

    // Exact pivot and ball distances.
    let started = Instant::now();
    let pre = est.snapshot();
    let work = seed_pivot_distances(&est, &pivots, &balls);
    recorder.record("seed_distances", started, work, &est, &pre);
    recorder.snapshot("seed_distances", &est);

    // Closeness enforcement at every level.
    {
        let mut last = est.snapshot();
        let mut started = Instant::now();
        ensure_closeness(
            &hierarchy.levels,
            &level_filters,
            &pivots,
            &pivot_arcs,
            &est,
            |name, work| {
                recorder.record(&name, started, work, &est, &last);
                last = est.snapshot();
                started = Instant::now();
            },
        );
        recorder.snapshot("ensure_closeness", &est);
    }

    // Base case: widest scales, wide-open filters.
    if let Some(samples) = &base_samples {
        let started = Instant::now();
        let pre = est.snapshot();
        let work = base_case(g, &est, samples, &hierarchy, &mut filter_cache, cfg.c_deg);
        recorder.record("base_case", started, work, &est, &pre);
    }
    recorder.snapshot("base_case", &est);

    Ok(PreparedRun {
        graph: g,
        config: cfg.clone(),
        exact_fallback: false,
        est: est.snapshot(),
        structures: Some(Arc::new(RunStructures {
            hierarchy,
            base_samples,
            pivots,
            balls,
            inverse,
        })),
        level_filters,
        pivot_arcs,
        recorder,
        anomalies,
    })
}

impl<'g> PreparedRun<'g> {
    pub fn structures(&self) -> Option<&RunStructures> {
        self.structures.as_deref()
    }

    pub fn estimate_snapshot(&self) -> &DistMatrix {
        &self.est
    }

    /// Runs the k-dependent tail (iterations plus the final wide step) on a
    /// copy of the prefix estimates. Callable repeatedly with different k.
    pub fn finish(&self, k: u32) -> Result<RunOutput> {
        let n = self.graph.vertex_count();
        validate_k(k, n)?;
        let est = EstimateMatrix::from_snapshot(&self.est);
        let mut recorder = Recorder {
            phases: self.recorder.phases.clone(),
            snapshots: self.recorder.snapshots.clone(),
            keep_snapshots: self.recorder.keep_snapshots,
        };

        let (levels, i_stop) = if self.exact_fallback {
            (0, -1)
        } else {
            let structures = self.structures.as_ref().expect("non-fallback structures");
            let levels = structures.hierarchy.level_count();
            let i_stop = stop_level(levels, k);
            let mut i = levels as i64 - 2;
            while i > i_stop {
                self.general_iteration(i as usize, structures, &est, &mut recorder);
                recorder.snapshot(&format!("iteration_{i}"), &est);
                i -= 1;
            }
            if i_stop >= 0 {
                self.final_step(i_stop as usize, structures, &est, &mut recorder);
                recorder.snapshot("final_step", &est);
            }
            (levels, i_stop)
        };
        recorder.snapshot("final", &est);

        let total_relax: u64 = recorder.phases.iter().map(|p| p.relax_attempts).sum();
        let total_edges: u64 = recorder.phases.iter().map(|p| p.edges_scanned).sum();
        let report = RunReport {
            n,
            m: self.graph.edge_count(),
            k,
            seed: self.config.seed,
            levels,
            stop_level: i_stop,
            guarantee_threshold: guarantee_threshold(k),
            exact_fallback: self.exact_fallback,
            config: RunConfig {
                k,
                ..self.config.clone()
            },
            phases: recorder.phases,
            total_relax_attempts: total_relax,
            total_edges_scanned: total_edges,
            anomalies: self.anomalies,
            matrix_digest: format!("{:016x}", est.digest()),
        };
        Ok(RunOutput {
            est,
            report,
            snapshots: recorder.snapshots,
            structures: self.structures.clone(),
        })
    }

    /// Parts 1 and 2 at level i+1, then the candidate triple pass over the
    /// level-i pairs: for each x, estimates route through a ball member or
    /// inverse-pivot member w and w's level-(i+1) pivot.
    fn general_iteration(
        &self,
        i: usize,
        s: &RunStructures,
        est: &EstimateMatrix,
        recorder: &mut Recorder,
    ) {
        let upper = i + 1;
        let sources = &s.hierarchy.levels[upper];

        let started = Instant::now();
        let pre = est.snapshot();
        let w1 = update_pass(sources, &self.level_filters[upper], &self.pivot_arcs, est);
        recorder.record(&format!("iter{i}_p1"), started, w1, est, &pre);
        let started = Instant::now();
        let pre = est.snapshot();
        let w2 = update_pass(sources, &self.level_filters[upper], &self.pivot_arcs, est);
        recorder.record(&format!("iter{i}_p2"), started, w2, est, &pre);

        let started = Instant::now();
        let snap = est.snapshot();
        let level_set = &s.hierarchy.levels[i];
        let w3: PhaseWork = level_set
            .par_iter()
            .map(|&x| {
                let candidates = candidate_hops(
                    x,
                    &s.balls[upper],
                    Some(&s.inverse[i]),
                    false,
                    &s.pivots[upper],
                    &snap,
                );
                let mut attempts = 0u64;
                for &(pw, base) in &candidates {
                    for &y in level_set.iter() {
                        if y == x {
                            continue;
                        }
                        let cand = base + snap.get(pw, y);
                        if cand.is_finite() {
                            est.relax(x, y, cand);
                        }
                        attempts += 1;
                    }
                }
                PhaseWork {
                    relax_attempts: attempts,
                    edges_scanned: 0,
                }
            })
            .reduce(PhaseWork::default, PhaseWork::merge);
        recorder.record(&format!("iter{i}_p3"), started, w3, est, &snap);
    }

    /// Parts 1 and 2 at level i+1, then the wide candidate pass over every
    /// vertex pair, with candidates from the ball plus the vertex itself.
    fn final_step(
        &self,
        i: usize,
        s: &RunStructures,
        est: &EstimateMatrix,
        recorder: &mut Recorder,
    ) {
        let n = self.graph.vertex_count();
        let upper = i + 1;
        let sources = &s.hierarchy.levels[upper];

        let started = Instant::now();
        let pre = est.snapshot();
        let w1 = update_pass(sources, &self.level_filters[upper], &self.pivot_arcs, est);
        recorder.record("final_p1", started, w1, est, &pre);
        let started = Instant::now();
        let pre = est.snapshot();
        let w2 = update_pass(sources, &self.level_filters[upper], &self.pivot_arcs, est);
        recorder.record("final_p2", started, w2, est, &pre);

        let started = Instant::now();
        let snap = est.snapshot();
        let w3: PhaseWork = (0..n as Vertex)
            .into_par_iter()
            .map(|x| {
                let candidates =
                    candidate_hops(x, &s.balls[upper], None, true, &s.pivots[upper], &snap);
                let mut attempts = 0u64;
                for &(pw, base) in &candidates {
                    for y in 0..n as Vertex {
                        if y == x {
                            continue;
                        }
                        let cand = base + snap.get(pw, y);
                        if cand.is_finite() {
                            est.relax(x, y, cand);
                        }
                        attempts += 1;
                    }
                }
                PhaseWork {
                    relax_attempts: attempts,
                    edges_scanned: 0,
                }
            })
            .reduce(PhaseWork::default, PhaseWork::merge);
        recorder.record("final_p3", started, w3, est, &snap);
    }
}

/// Collects (pivot, est(x,w) + est(w,pivot)) hop candidates for one x, where
/// w ranges over the level ball of x, optionally the inverse-pivot members
/// of x, and optionally x itself. Deduplicated per pivot by minimal base.
fn candidate_hops(
    x: Vertex,
    balls_upper: &BallLevel,
    inverse: Option<&PivotInverseLevel>,
    include_self: bool,
    pivots_upper: &PivotLevel,
    snap: &DistMatrix,
) -> Vec<(Vertex, Dist)> {
    let mut cands: Vec<(Vertex, Dist)> = Vec::new();
    let push = |w: Vertex, cands: &mut Vec<(Vertex, Dist)>| {
        if !pivots_upper.defined(w) {
            return;
        }
        let pw = pivots_upper.pivot[w as usize];
        let base = snap.get(x, w) + snap.get(w, pw);
        if base.is_finite() {
            cands.push((pw, base));
        }
    };
    let (members, _) = balls_upper.ball(x);
    for &w in members {
        push(w, &mut cands);
    }
    if let Some(inv) = inverse {
        for &w in inv.assigned_to(x) {
            push(w, &mut cands);
        }
    }
    if include_self {
        push(x, &mut cands);
    }
    cands.sort_unstable_by_key(|&(pw, base)| (pw, base.0));
    cands.dedup_by(|a, b| {
        if a.0 == b.0 {
            b.1 = b.1.min(a.1);
            true
        } else {
            false
        }
    });
    cands
}

/// The wide-scale pass: for every scale, BFS in "edges at w plus the scale's
/// filter" from every sampled w, then pairwise hops between the top-level
/// vertices through w.
fn base_case(
    g: &Graph,
    est: &EstimateMatrix,
    samples: &BaseSamples,
    hierarchy: &SampleHierarchy,
    filters: &mut FilterCache,
    c_deg: u32,
) -> PhaseWork {
    let n = g.vertex_count();
    let snap = est.snapshot();
    let top = hierarchy.levels[hierarchy.level_count() - 1].clone();
    let log_n = ceil_log2(n) as u64;

    let mut jobs: Vec<(Arc<Graph>, Vertex)> = Vec::new();
    for (scale, sample) in samples.scales() {
        let tau = ((c_deg as u64) << (scale as u64 + 1)).saturating_mul(log_n);
        let tau = tau.min(u32::MAX as u64) as u32;
        let filtered = filters.get(tau);
        for &w in sample {
            jobs.push((filtered.clone(), w));
        }
    }

    jobs.par_iter()
        .map_init(
            || BfsScratch::new(n),
            |scratch, (filtered, w)| {
                let w = *w;
                let stats = bfs_capped_into(filtered, w, Some((w, g)), INFINITY, scratch);
                let mut attempts = 0u64;
                for &t in scratch.touched() {
                    if t != w {
                        est.relax(w, t, scratch.dist[t as usize]);
                        attempts += 1;
                    }
                }
                // Pairwise hops across the top level through w, using w's own
                // fresh distances merged over the phase snapshot.
                let row: Vec<Dist> = top
                    .iter()
                    .map(|&x| snap.get(w, x).min(scratch.dist[x as usize]))
                    .collect();
                for (ai, &x) in top.iter().enumerate() {
                    if !row[ai].is_finite() {
                        continue;
                    }
                    for (bi, &y) in top.iter().enumerate().skip(ai + 1) {
                        let cand = row[ai] + row[bi];
                        if cand.is_finite() {
                            est.relax(x, y, cand);
                        }
                        attempts += 1;
                    }
                }
                PhaseWork {
                    relax_attempts: attempts,
                    edges_scanned: stats.edges_scanned,
                }
            },
        )
        .reduce(PhaseWork::default, PhaseWork::merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family, GeneratorSpec};

    #[test]
    fn k_validation() {
        assert!(validate_k(2, 1024).is_ok());
        assert!(validate_k(10, 1024).is_ok());
        assert!(validate_k(11, 1024).is_err());
        assert!(validate_k(1, 1024).is_err());
        assert_eq!(guarantee_threshold(2), 36);
        assert_eq!(guarantee_threshold(4), 54);
        assert_eq!(guarantee_threshold(11), 72);
    }

    #[test]
    fn stop_level_degenerates_for_max_k() {
        // L=3 at n=2048; k=8 and k=11 both floor to log2 >= 3.
        assert_eq!(stop_level(3, 8), -1);
        assert_eq!(stop_level(3, 11), -1);
        assert_eq!(stop_level(3, 2), 1);
        assert_eq!(stop_level(3, 4), 0);
    }

    #[test]
    fn tiny_graph_takes_exact_fallback() {
        let g = generate(&GeneratorSpec::new(Family::Path, 10, 0)).unwrap();
        let out = run(&g, &RunConfig::default()).unwrap();
        assert!(out.report.exact_fallback);
        for s in 0..10u32 {
            for t in 0..10u32 {
                let d = (s as i64 - t as i64).unsigned_abs() as u32;
                assert_eq!(out.est.get(s, t), Dist(d));
            }
        }
    }

    #[test]
    fn forced_pipeline_on_path_is_exact_everywhere() {
        let g = generate(&GeneratorSpec::new(Family::Path, 64, 0)).unwrap();
        let cfg = RunConfig {
            force_pipeline: true,
            ..Default::default()
        };
        let out = run(&g, &cfg).unwrap();
        assert!(!out.report.exact_fallback);
        for s in 0..64u32 {
            for t in 0..64u32 {
                let d = (s as i64 - t as i64).unsigned_abs() as u32;
                assert_eq!(out.est.get(s, t), Dist(d), "({s},{t})");
            }
        }
    }

    #[test]
    fn same_config_same_digest_any_thread_count() {
        let mut spec = GeneratorSpec::new(Family::Gnp, 300, 5);
        spec.p = 0.03;
        let g = generate(&spec).unwrap();
        let base = RunConfig {
            force_pipeline: true,
            k: 4,
            seed: 5,
            ..Default::default()
        };
        let one = run(
            &g,
            &RunConfig {
                threads: Some(1),
                ..base.clone()
            },
        )
        .unwrap();
        let many = run(
            &g,
            &RunConfig {
                threads: Some(8),
                ..base
            },
        )
        .unwrap();
        assert_eq!(one.report.matrix_digest, many.report.matrix_digest);
        let d1: Vec<_> = one.report.phases.iter().map(|p| p.digest.clone()).collect();
        let d2: Vec<_> = many
            .report
            .phases
            .iter()
            .map(|p| p.digest.clone())
            .collect();
        assert_eq!(d1, d2);
    }

    #[test]
    fn phase_counters_sum_to_totals() {
        let mut spec = GeneratorSpec::new(Family::Gnp, 280, 2);
        spec.p = 0.03;
        let g = generate(&spec).unwrap();
        let out = run(
            &g,
            &RunConfig {
                k: 4,
                ..Default::default()
            },
        )
        .unwrap();
        let sum: u64 = out.report.phases.iter().map(|p| p.relax_attempts).sum();
        assert_eq!(sum, out.report.total_relax_attempts);
    }
}
