//! Exact brute-force oracle, guarantee checking, and analysis-witness
//! extraction.
//!
//! Everything here is a pure function of (graph, matrices, sampling); the
//! exact matrix is the unique ground truth the rest of the crate is judged
//! against. Witness checks gate on exactly the events the corresponding
//! derivations consume, so where the gates hold the inequalities are
//! theorems and any miss points at an implementation bug rather than bad
//! luck.

use crate::dist::{Dist, Vertex, INFINITY};
use crate::error::{Error, Result};
use crate::estimate::{ceil_log2, DistMatrix, EstimateMatrix};
use crate::graph::Graph;
use crate::pipeline::{guarantee_threshold, stop_level, RunOutput};
use crate::pivots::{compute_pivots, level_degree_cap, PivotLevel, PivotMode};
use crate::sampling::SampleHierarchy;
use crate::sssp::{bfs_capped_into, BfsScratch};
use rayon::prelude::*;
use serde::Serialize;

/// Exact hop distances between all pairs (full BFS per vertex).
pub fn exact_apsp(g: &Graph) -> DistMatrix {
    let n = g.vertex_count();
    let est = EstimateMatrix::new(n);
    (0..n as Vertex).into_par_iter().for_each_init(
        || BfsScratch::new(n),
        |scratch, s| {
            bfs_capped_into(g, s, None, INFINITY, scratch);
            for &t in scratch.touched() {
                if t > s {
                    est.relax(s, t, scratch.dist[t as usize]);
                }
            }
        },
    );
    est.snapshot()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PairViolation {
    pub s: Vertex,
    pub t: Vertex,
    pub d: u32,
    pub est: u32,
}

const SAMPLE_CAP: usize = 10;

#[derive(Clone, Debug, Default, Serialize)]
pub struct ViolationSamples {
    pub soundness: Vec<PairViolation>,
    pub two_approx: Vec<PairViolation>,
    pub additive: Vec<PairViolation>,
}

/// Comparison of an estimate matrix against the exact oracle.
#[derive(Clone, Debug, Serialize)]
pub struct StretchReport {
    pub n: usize,
    pub k: u32,
    pub guarantee_threshold: u32,
    /// est < d anywhere.
    pub soundness_violations: u64,
    /// d >= threshold and est > 2d.
    pub two_approx_violations: u64,
    /// est > max(2d, d + threshold) anywhere.
    pub additive_violations: u64,
    /// est > 2d+1 in the supplied initializer snapshot.
    pub init_contract_violations: Option<u64>,
    pub finite_pairs: u64,
    pub max_stretch: f64,
    pub max_additive_gap: u32,
    /// (gap, count) for additive gaps est - d over connected pairs.
    pub additive_gap_histogram: Vec<(u32, u64)>,
    pub samples: ViolationSamples,
}

impl StretchReport {
    /// Exit-status predicate: soundness and the distance-threshold
    /// 2-approximation guarantee both clean.
    pub fn is_clean(&self) -> bool {
        self.soundness_violations == 0 && self.two_approx_violations == 0
    }
}

pub fn check_guarantees(
    est: &DistMatrix,
    exact: &DistMatrix,
    k: u32,
    init_snapshot: Option<&DistMatrix>,
) -> Result<StretchReport> {
    if est.n() != exact.n() {
        return Err(Error::DimensionMismatch {
            matrix_n: est.n(),
            graph_n: exact.n(),
        });
    }
    let n = exact.n();
    let threshold = guarantee_threshold(k);

    #[derive(Default)]
    struct Acc {
        soundness: u64,
        two_approx: u64,
        additive: u64,
        init: u64,
        finite: u64,
        max_stretch: f64,
        max_gap: u32,
        hist: std::collections::BTreeMap<u32, u64>,
        samples: ViolationSamples,
    }

    let mut acc = Acc::default();
    for s in 0..n as Vertex {
        for t in (s + 1)..n as Vertex {
            let d = exact.get(s, t);
            let e = est.get(s, t);
            if let Some(init) = init_snapshot {
                let ei = init.get(s, t);
                let bound = if d.is_finite() { 2 * d.0 + 1 } else { u32::MAX };
                if ei.0 > bound {
                    acc.init += 1;
                }
            }
            if e < d {
                acc.soundness += 1;
                if acc.samples.soundness.len() < SAMPLE_CAP {
                    acc.samples.soundness.push(PairViolation {
                        s,
                        t,
                        d: d.0,
                        est: e.0,
                    });
                }
                continue;
            }
            if !d.is_finite() {
                continue;
            }
            acc.finite += 1;
            let gap = e.0 - d.0;
            acc.max_gap = acc.max_gap.max(gap);
            *acc.hist.entry(gap).or_insert(0) += 1;
            if d.0 >= 1 {
                acc.max_stretch = acc.max_stretch.max(e.0 as f64 / d.0 as f64);
            }
            if d.0 >= threshold && e.0 > 2 * d.0 {
                acc.two_approx += 1;
                if acc.samples.two_approx.len() < SAMPLE_CAP {
                    acc.samples.two_approx.push(PairViolation {
                        s,
                        t,
                        d: d.0,
                        est: e.0,
                    });
                }
            }
            if e.0 > (2 * d.0).max(d.0 + threshold) {
                acc.additive += 1;
                if acc.samples.additive.len() < SAMPLE_CAP {
                    acc.samples.additive.push(PairViolation {
                        s,
                        t,
                        d: d.0,
                        est: e.0,
                    });
                }
            }
        }
    }

    Ok(StretchReport {
        n,
        k,
        guarantee_threshold: threshold,
        soundness_violations: acc.soundness,
        two_approx_violations: acc.two_approx,
        additive_violations: acc.additive,
        init_contract_violations: init_snapshot.map(|_| acc.init),
        finite_pairs: acc.finite,
        max_stretch: acc.max_stretch,
        max_additive_gap: acc.max_gap,
        additive_gap_histogram: acc.hist.into_iter().collect(),
        samples: acc.samples,
    })
}

/// Verify-command JSON: guarantees plus (optionally) lemma satisfaction
/// rates.
pub fn verify_report_json(stretch: &StretchReport, lemmas: Option<&LemmaReport>) -> String {
    let lemma_rates = match lemmas {
        Some(l) => serde_json::json!({
            "closeness_disjunction": l.closeness_disjunction.rate(),
            "ball_membership": l.ball_membership.rate(),
            "base_plus4": l.base_plus4.rate(),
            "mainclaim": l.mainclaim.rate(),
            "final_additive": l.final_additive.rate(),
        }),
        None => serde_json::json!({}),
    };
    serde_json::to_string_pretty(&serde_json::json!({
        "n": stretch.n,
        "k": stretch.k,
        "guarantee_threshold": stretch.guarantee_threshold,
        "soundness_violations": stretch.soundness_violations,
        "two_approx_violations": stretch.two_approx_violations,
        "additive_violations": stretch.additive_violations,
        "init_contract_violations": stretch.init_contract_violations,
        "finite_pairs": stretch.finite_pairs,
        "max_stretch": stretch.max_stretch,
        "max_additive_gap": stretch.max_additive_gap,
        "lemma_rates": lemma_rates,
        "samples": stretch.samples,
    }))
    .expect("verify report serializes")
}

/// Per-level analysis witnesses for one pair, extracted from the canonical
/// shortest path: the anchors are the path vertices nearest each endpoint
/// lying within one hop of the level set, and their pivots.
#[derive(Clone, Debug)]
pub struct LevelWitness {
    /// Index on the path of the source-side anchor, and the anchor's pivot.
    pub src: Option<(usize, Vertex)>,
    /// Index on the path of the target-side anchor, and the anchor's pivot.
    pub dst: Option<(usize, Vertex)>,
}

#[derive(Clone, Debug)]
pub struct PairWitness {
    pub s: Vertex,
    pub t: Vertex,
    /// Canonical shortest path, s first, t last.
    pub path: Vec<Vertex>,
    pub levels: Vec<LevelWitness>,
}

/// Canonical BFS parents toward `s`: the smallest-id neighbor one hop
/// closer. Unreachable and the source itself get `u32::MAX`.
pub fn canonical_parents(g: &Graph, s: Vertex, exact: &DistMatrix) -> Vec<Vertex> {
    let n = g.vertex_count();
    let mut parent = vec![u32::MAX; n];
    for v in 0..n as Vertex {
        let dv = exact.get(s, v);
        if v == s || !dv.is_finite() {
            continue;
        }
        // Neighbors are sorted ascending, so the first predecessor found is
        // the smallest-id one.
        for &u in g.neighbors(v) {
            if exact.get(s, u).0 + 1 == dv.0 {
                parent[v as usize] = u;
                break;
            }
        }
    }
    parent
}

/// Canonical shortest path from s to t (s first), via smallest-id parents.
pub fn canonical_path(
    s: Vertex,
    t: Vertex,
    parents_of_s: &[Vertex],
    exact: &DistMatrix,
) -> Result<Vec<Vertex>> {
    if s != t && !exact.get(s, t).is_finite() {
        return Err(Error::DisconnectedPair { s, t });
    }
    let mut path = vec![t];
    let mut cur = t;
    while cur != s {
        cur = parents_of_s[cur as usize];
        path.push(cur);
    }
    path.reverse();
    Ok(path)
}

/// Witnesses along a given shortest path, against reference pivot tables.
pub fn witnesses_on_path(path: &[Vertex], ref_pivots: &[PivotLevel]) -> Vec<LevelWitness> {
    ref_pivots
        .iter()
        .map(|level| {
            let near = |v: Vertex| level.defined(v) && level.dist[v as usize] <= Dist(1);
            let src = path
                .iter()
                .position(|&v| near(v))
                .map(|i| (i, level.pivot[path[i] as usize]));
            let dst = path
                .iter()
                .rposition(|&v| near(v))
                .map(|i| (i, level.pivot[path[i] as usize]));
            LevelWitness { src, dst }
        })
        .collect()
}

/// Reference pivot tables for witness work, rebuilt from the hierarchy.
pub fn reference_pivots(g: &Graph, hierarchy: &SampleHierarchy) -> Vec<PivotLevel> {
    (0..hierarchy.level_count())
        .map(|i| {
            compute_pivots(g, hierarchy, i, PivotMode::Reference, 0)
                .expect("level in range")
                .0
        })
        .collect()
}

/// Witness extraction for one pair: canonical path plus per-level anchors.
pub fn extract_witnesses(
    g: &Graph,
    exact: &DistMatrix,
    ref_pivots: &[PivotLevel],
    s: Vertex,
    t: Vertex,
) -> Result<PairWitness> {
    let parents = canonical_parents(g, s, exact);
    let path = canonical_path(s, t, &parents, exact)?;
    let levels = witnesses_on_path(&path, ref_pivots);
    Ok(PairWitness { s, t, path, levels })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LemmaRate {
    pub checked: u64,
    pub satisfied: u64,
    /// Up to a few violating instances, for triage.
    pub violations: Vec<String>,
}

impl LemmaRate {
    pub fn rate(&self) -> f64 {
        if self.checked == 0 {
            1.0
        } else {
            self.satisfied as f64 / self.checked as f64
        }
    }

    fn add(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if ok {
            self.satisfied += 1;
        } else if self.violations.len() < SAMPLE_CAP {
            self.violations.push(describe());
        }
    }

    fn merge(&mut self, other: LemmaRate) {
        self.checked += other.checked;
        self.satisfied += other.satisfied;
        for v in other.violations {
            if self.violations.len() < SAMPLE_CAP {
                self.violations.push(v);
            }
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LemmaReport {
    /// After closeness enforcement, for pairs still above twice the true
    /// distance: one endpoint's anchor gap to its pivot distance is <= 3.
    pub closeness_disjunction: LemmaRate,
    /// The path vertex three hops inside the pivot radius belongs to the
    /// anchor pivot's upper-level ball.
    pub ball_membership: LemmaRate,
    /// After the wide-scale pass, the top-level witness pair is within +4.
    pub base_plus4: LemmaRate,
    /// After iteration i, witness pivots are within 18*(levels - i).
    pub mainclaim: LemmaRate,
    /// After the final wide step, est(s,t) <= d + 18*(levels - stop_level).
    pub final_additive: LemmaRate,
}

struct SuiteCtx<'a> {
    g: &'a Graph,
    exact: &'a DistMatrix,
    ref_pivots: Vec<PivotLevel>,
    /// Per level i, the degree cap used in closeness overlays.
    level_caps: Vec<u32>,
    /// Per base scale, the scale's filter cap and per-vertex coverage (in
    /// the sample or adjacent to it).
    base_scales: Vec<(u32, Vec<bool>)>,
    levels: usize,
    i_stop: i64,
    post_ec: &'a DistMatrix,
    post_base: &'a DistMatrix,
    iter_snaps: Vec<Option<&'a DistMatrix>>,
    final_snap: Option<&'a DistMatrix>,
    exhaustive: bool,
}

/// Empirical evaluation of the per-level guarantees on every connected pair,
/// gated by each derivation's actual preconditions.
pub fn check_lemma_suite(g: &Graph, exact: &DistMatrix, output: &RunOutput) -> Result<LemmaReport> {
    let n = g.vertex_count();
    let structures = output
        .structures
        .as_ref()
        .ok_or_else(|| Error::MissingSnapshot("structures".into()))?;
    let need = |label: &str| {
        output
            .snapshot(label)
            .ok_or_else(|| Error::MissingSnapshot(label.into()))
    };
    let post_ec = need("ensure_closeness")?;
    let post_base = need("base_case")?;
    let levels = structures.hierarchy.level_count();
    let i_stop = stop_level(levels, output.report.k);
    let mut iter_snaps = Vec::with_capacity(levels);
    for i in 0..levels {
        iter_snaps.push(output.snapshot(&format!("iteration_{i}")));
    }
    let final_snap = output.snapshot("final_step");
    if i_stop >= 0 && final_snap.is_none() {
        return Err(Error::MissingSnapshot("final_step".into()));
    }

    let c_deg = output.report.config.c_deg;
    let ref_pivots = reference_pivots(g, &structures.hierarchy);
    let level_caps: Vec<u32> = (0..levels).map(|i| level_degree_cap(n, i, c_deg)).collect();

    // Base-scale coverage: for each scale, is v in the sample or adjacent to
    // a sample member?
    let log_n = ceil_log2(n) as u64;
    let mut base_scales = Vec::new();
    if let Some(samples) = &structures.base_samples {
        for (scale, members) in samples.scales() {
            let tau = (((c_deg as u64) << (scale as u64 + 1)).saturating_mul(log_n))
                .min(u32::MAX as u64) as u32;
            let mut covered = vec![false; n];
            for &w in members {
                covered[w as usize] = true;
                for &v in g.neighbors(w) {
                    covered[v as usize] = true;
                }
            }
            base_scales.push((tau, covered));
        }
    }

    let ctx = SuiteCtx {
        g,
        exact,
        ref_pivots,
        level_caps,
        base_scales,
        levels,
        i_stop,
        post_ec,
        post_base,
        iter_snaps,
        final_snap,
        exhaustive: n <= 64,
    };

    let report = (0..n as Vertex)
        .into_par_iter()
        .map(|s| {
            let mut local = LemmaReport::default();
            let parents = canonical_parents(g, s, exact);
            for t in (s + 1)..n as Vertex {
                if !exact.get(s, t).is_finite() {
                    continue;
                }
                let path = canonical_path(s, t, &parents, exact).expect("connected");
                check_pair(&ctx, s, t, &path, &mut local);
            }
            local
        })
        .reduce(LemmaReport::default, |mut a, b| {
            a.closeness_disjunction.merge(b.closeness_disjunction);
            a.ball_membership.merge(b.ball_membership);
            a.base_plus4.merge(b.base_plus4);
            a.mainclaim.merge(b.mainclaim);
            a.final_additive.merge(b.final_additive);
            a
        });
    Ok(report)
}

/// Evaluates every gated check for one pair on one shortest path. On a miss
/// with exhaustive mode enabled, retries over all shortest paths and counts
/// the check satisfied if any path satisfies it.
fn check_pair(ctx: &SuiteCtx<'_>, s: Vertex, t: Vertex, path: &[Vertex], out: &mut LemmaReport) {
    let primary = evaluate_path(ctx, s, t, path);
    let alt = |miss: &PathChecks| -> PathChecks {
        // Exhaustive fallback: a lemma speaks about some shortest path; the
        // canonical one may just be the wrong witness.
        let mut merged = miss.clone();
        if ctx.exhaustive {
            for p in enumerate_shortest_paths(ctx.g, ctx.exact, s, t, 20_000) {
                let other = evaluate_path(ctx, s, t, &p);
                merged.absorb_satisfied(&other);
            }
        }
        merged
    };
    let checks = if primary.any_miss() && ctx.exhaustive {
        alt(&primary)
    } else {
        primary
    };
    let d = ctx.exact.get(s, t).0;
    let desc = move |what: &str, extra: &str| format!("{what} s={s} t={t} d={d} {extra}");
    for (gated, ok, extra) in &checks.closeness {
        if *gated {
            out.closeness_disjunction
                .add(*ok, || desc("closeness", extra));
        }
    }
    for (gated, ok, extra) in &checks.ball {
        if *gated {
            out.ball_membership.add(*ok, || desc("ball", extra));
        }
    }
    if let Some((ok, extra)) = &checks.base {
        out.base_plus4.add(*ok, || desc("base+4", extra));
    }
    for (gated, ok, extra) in &checks.mainclaim {
        if *gated {
            out.mainclaim.add(*ok, || desc("mainclaim", extra));
        }
    }
    if let Some((ok, extra)) = &checks.final_additive {
        out.final_additive.add(*ok, || desc("final", extra));
    }
}

#[derive(Clone, Default)]
struct PathChecks {
    /// (gated, satisfied, description) per level.
    closeness: Vec<(bool, bool, String)>,
    ball: Vec<(bool, bool, String)>,
    base: Option<(bool, String)>,
    mainclaim: Vec<(bool, bool, String)>,
    final_additive: Option<(bool, String)>,
}

impl PathChecks {
    fn any_miss(&self) -> bool {
        self.closeness.iter().any(|(g, ok, _)| *g && !ok)
            || self.ball.iter().any(|(g, ok, _)| *g && !ok)
            || self.base.as_ref().is_some_and(|(ok, _)| !ok)
            || self.mainclaim.iter().any(|(g, ok, _)| *g && !ok)
            || self.final_additive.as_ref().is_some_and(|(ok, _)| !ok)
    }

    /// Rescues misses that another shortest path satisfies under its gate.
    fn absorb_satisfied(&mut self, other: &PathChecks) {
        let absorb = |mine: &mut Vec<(bool, bool, String)>, theirs: &[(bool, bool, String)]| {
            for (m, o) in mine.iter_mut().zip(theirs) {
                if m.0 && o.0 && o.1 {
                    m.1 = true;
                }
            }
        };
        absorb(&mut self.closeness, &other.closeness);
        absorb(&mut self.ball, &other.ball);
        absorb(&mut self.mainclaim, &other.mainclaim);
        if let (Some(m), Some(o)) = (self.base.as_mut(), other.base.as_ref()) {
            if o.0 {
                m.0 = true;
            }
        }
        if let (Some(m), Some(o)) = (self.final_additive.as_mut(), other.final_additive.as_ref()) {
            if o.0 {
                m.0 = true;
            }
        }
    }
}

fn evaluate_path(ctx: &SuiteCtx<'_>, s: Vertex, t: Vertex, path: &[Vertex]) -> PathChecks {
    let g = ctx.g;
    let exact = ctx.exact;
    let d = (path.len() - 1) as u32;
    let witnesses = witnesses_on_path(path, &ctx.ref_pivots);
    let over_2d = ctx.post_ec.get(s, t).0 > 2 * d;

    // Edge degrees along the path, with prefix/suffix maxima.
    let edge_degs: Vec<u32> = path
        .windows(2)
        .map(|w| g.degree(w[0]).min(g.degree(w[1])))
        .collect();
    let mut prefix_max = vec![0u32; edge_degs.len() + 1];
    for (j, &e) in edge_degs.iter().enumerate() {
        prefix_max[j + 1] = prefix_max[j].max(e);
    }
    let mut suffix_max = vec![0u32; edge_degs.len() + 1];
    for j in (0..edge_degs.len()).rev() {
        suffix_max[j] = suffix_max[j + 1].max(edge_degs[j]);
    }
    // Filter containment of the two endpoint segments at one level.
    let onpath_ok = |level: usize, w: &LevelWitness| -> bool {
        match (w.src, w.dst) {
            (Some((ai, _)), Some((bi, _))) => {
                prefix_max[ai] <= ctx.level_caps[level] && suffix_max[bi] <= ctx.level_caps[level]
            }
            _ => false,
        }
    };

    let pd = |level: usize, v: Vertex| ctx.ref_pivots[level].dist[v as usize];

    let mut checks = PathChecks::default();

    // Closeness disjunction, per level.
    for (i, w) in witnesses.iter().enumerate() {
        let gate = over_2d
            && w.src.is_some()
            && w.dst.is_some()
            && pd(i, s).is_finite()
            && pd(i, t).is_finite()
            && onpath_ok(i, w);
        let mut ok = true;
        let mut extra = String::new();
        if gate {
            let (ai, _) = w.src.unwrap();
            let (bi, _) = w.dst.unwrap();
            let sa = ai as i64;
            let tb = (path.len() - 1 - bi) as i64;
            let side_s = sa <= tb && sa - pd(i, s).0 as i64 <= 3;
            let side_t = sa >= tb && tb - pd(i, t).0 as i64 <= 3;
            ok = side_s || side_t;
            if !ok {
                extra = format!(
                    "level={i} sa={sa} tb={tb} pd_s={:?} pd_t={:?}",
                    pd(i, s),
                    pd(i, t)
                );
            }
        }
        checks.closeness.push((gate, ok, extra));
    }

    // Ball membership of the vertex three hops inside the pivot radius.
    // The statement needs only the A1-branch content plus the anchor jump,
    // so it is checked wherever those hold, not only on far-off pairs.
    for i in 0..ctx.levels.saturating_sub(1) {
        let upper = i + 1;
        let w_i = &witnesses[i];
        let w_up = &witnesses[upper];
        let mut gate = false;
        let mut ok = true;
        let mut extra = String::new();
        if let (Some((ai, ui)), Some((aui, _))) = (w_i.src, w_up.src) {
            let pd_s = pd(upper, s);
            let a_gap = aui as i64 - ai as i64;
            let a1_holds = pd_s.is_finite()
                && w_up.dst.is_some_and(|(bi, _)| {
                    let sa = aui as i64;
                    let tb = (path.len() - 1 - bi) as i64;
                    sa <= tb && sa - pd_s.0 as i64 <= 3
                });
            gate = a1_holds
                && a_gap >= 6
                && pd_s.0 >= 3
                && (pd_s.0 as usize) < path.len()
                && pd(upper, ui).is_finite();
            if gate {
                let z = path[(pd_s.0 - 3) as usize];
                ok = exact.get(ui, z) < pd(upper, ui);
                if !ok {
                    extra = format!(
                        "level={i} z={z} d(u,z)={:?} pd_up(u)={:?}",
                        exact.get(ui, z),
                        pd(upper, ui)
                    );
                }
            }
        }
        checks.ball.push((gate, ok, extra));
    }

    // Base-case +4 at the top level.
    let top = ctx.levels - 1;
    let wt = &witnesses[top];
    if let (Some((ai, ui)), Some((bi, vi))) = (wt.src, wt.dst) {
        // The widest filter must hold the anchored segment and both pivot
        // attachment edges, and the scale's sample must touch the segment.
        let a = path[ai];
        let b = path[bi];
        let mut seg_max = edge_degs[ai..bi].iter().copied().max().unwrap_or(0);
        if ui != a {
            seg_max = seg_max.max(g.degree(ui).min(g.degree(a)));
        }
        if vi != b {
            seg_max = seg_max.max(g.degree(vi).min(g.degree(b)));
        }
        let hit = ctx.base_scales.iter().any(|(tau, covered)| {
            *tau >= seg_max && path[ai..=bi].iter().any(|&p| covered[p as usize])
        });
        if hit {
            let bound = (bi - ai) as u32 + 4;
            let got = ctx.post_base.get(ui, vi);
            let ok = got.0 <= bound;
            checks.base = Some((
                ok,
                if ok {
                    String::new()
                } else {
                    format!("u={ui} v={vi} est={got:?} bound={bound}")
                },
            ));
        }
    }

    // Main claim after each executed iteration, top-down preconditions.
    let base_hit = checks.base.is_some();
    let mut chain_ok = base_hit && over_2d;
    let mut mainclaim = vec![(false, true, String::new()); ctx.levels];
    for i in (0..ctx.levels.saturating_sub(1)).rev() {
        if i as i64 <= ctx.i_stop {
            break;
        }
        let upper = i + 1;
        chain_ok = chain_ok
            && witnesses[upper].src.is_some()
            && witnesses[upper].dst.is_some()
            && onpath_ok(upper, &witnesses[upper]);
        let w_i = &witnesses[i];
        let gate = chain_ok && w_i.src.is_some() && w_i.dst.is_some();
        if let (true, Some(snap)) = (gate, ctx.iter_snaps[i]) {
            let (ai, ui) = w_i.src.unwrap();
            let (bi, vi) = w_i.dst.unwrap();
            let bound = (bi - ai) as u32 + 18 * (ctx.levels - i) as u32;
            let got = snap.get(ui, vi);
            let ok = got.0 <= bound;
            mainclaim[i] = (
                true,
                ok,
                if ok {
                    String::new()
                } else {
                    format!("level={i} u={ui} v={vi} est={got:?} bound={bound}")
                },
            );
        }
    }
    checks.mainclaim = mainclaim;

    // Final wide step: whole-pair additive bound.
    if ctx.i_stop >= 0 {
        let upper = (ctx.i_stop + 1) as usize;
        // The chain must be intact down to the stop level.
        let mut ok_chain = base_hit && over_2d;
        for (j, w) in witnesses.iter().enumerate().skip(upper) {
            ok_chain = ok_chain && w.src.is_some() && w.dst.is_some() && onpath_ok(j, w);
        }
        if ok_chain {
            if let Some(snap) = ctx.final_snap {
                let bound = d + 18 * (ctx.levels as i64 - ctx.i_stop) as u32;
                let got = snap.get(s, t);
                let ok = got.0 <= bound;
                checks.final_additive = Some((
                    ok,
                    if ok {
                        String::new()
                    } else {
                        format!("est={got:?} bound={bound}")
                    },
                ));
            }
        }
    }

    checks
}

/// All shortest s-t paths (capped), via DFS over the shortest-path DAG.
pub fn enumerate_shortest_paths(
    g: &Graph,
    exact: &DistMatrix,
    s: Vertex,
    t: Vertex,
    cap: usize,
) -> Vec<Vec<Vertex>> {
    let d = exact.get(s, t);
    if !d.is_finite() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut stack = vec![s];
    fn dfs(
        g: &Graph,
        exact: &DistMatrix,
        s: Vertex,
        t: Vertex,
        stack: &mut Vec<Vertex>,
        out: &mut Vec<Vec<Vertex>>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        let u = *stack.last().unwrap();
        if u == t {
            out.push(stack.clone());
            return;
        }
        for &v in g.neighbors(u) {
            if exact.get(s, v).0 == exact.get(s, u).0 + 1
                && exact.get(s, v) + exact.get(v, t) == exact.get(s, t)
            {
                stack.push(v);
                dfs(g, exact, s, t, stack, out, cap);
                stack.pop();
            }
        }
    }
    dfs(g, exact, s, t, &mut stack, &mut out, cap);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family, GeneratorSpec};
    use crate::sampling::build_hierarchy;

    fn path_graph(n: usize) -> Graph {
        let edges: Vec<_> = (0..n as Vertex - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edge_list(&edges, n).unwrap().0
    }

    #[test]
    fn exact_apsp_examples() {
        let p5 = path_graph(5);
        let d = exact_apsp(&p5);
        assert_eq!(d.get(0, 4), Dist(4));

        // Two disjoint triangles.
        let (g, _) =
            Graph::from_edge_list(&[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], 6).unwrap();
        let d = exact_apsp(&g);
        assert_eq!(d.get(0, 5), INFINITY);
        assert_eq!(d.get(0, 2), Dist(1));

        let mut spec = GeneratorSpec::new(Family::Grid, 100, 0);
        spec.p = 0.0;
        let grid = generate(&spec).unwrap();
        let d = exact_apsp(&grid);
        assert_eq!(d.get(0, 99), Dist(18));
    }

    #[test]
    fn check_guarantees_on_exact_matrix_is_clean() {
        let g = path_graph(40);
        let exact = exact_apsp(&g);
        let r = check_guarantees(&exact, &exact, 2, Some(&exact)).unwrap();
        assert!(r.is_clean());
        assert_eq!(r.additive_violations, 0);
        assert_eq!(r.init_contract_violations, Some(0));
        assert_eq!(r.max_additive_gap, 0);
    }

    #[test]
    fn pessimistic_initializer_flags_all_far_pairs() {
        // est = 2d+1 satisfies the init contract but violates the
        // 2-approximation for every pair past the distance threshold.
        let g = path_graph(100);
        let exact = exact_apsp(&g);
        let mut est = DistMatrix::filled(100, INFINITY);
        let mut far = 0;
        for s in 0..100u32 {
            est.set(s, s, Dist(0));
            for t in (s + 1)..100u32 {
                let d = exact.get(s, t);
                est.set(s, t, Dist(2 * d.0 + 1));
                if d.0 >= 36 {
                    far += 1;
                }
            }
        }
        let r = check_guarantees(&est, &exact, 2, Some(&est)).unwrap();
        assert_eq!(r.init_contract_violations, Some(0));
        assert_eq!(r.two_approx_violations, far);
        assert!(!r.is_clean());
    }

    #[test]
    fn soundness_violation_detected() {
        let g = path_graph(10);
        let exact = exact_apsp(&g);
        let mut est = exact.clone();
        est.set(0, 9, Dist(2));
        let r = check_guarantees(&est, &exact, 2, None).unwrap();
        assert_eq!(r.soundness_violations, 1);
        assert!(!r.is_clean());
    }

    #[test]
    fn witnesses_at_level_zero_are_endpoints() {
        let g = path_graph(6);
        let exact = exact_apsp(&g);
        let h = build_hierarchy(6, 1).unwrap();
        let pivots = reference_pivots(&g, &h);
        let w = extract_witnesses(&g, &exact, &pivots, 0, 5).unwrap();
        assert_eq!(w.path, vec![0, 1, 2, 3, 4, 5]);
        let lw = &w.levels[0];
        assert_eq!(lw.src, Some((0, 0)));
        assert_eq!(lw.dst, Some((5, 5)));
    }

    #[test]
    fn witness_anchor_is_minimal() {
        // Middle vertex is the only sampled one: anchors sit one hop away.
        let g = path_graph(7);
        let exact = exact_apsp(&g);
        let mut level_of = vec![0u8; 7];
        level_of[3] = 1;
        let h = SampleHierarchy {
            levels: vec![(0..7).collect(), vec![3]],
            level_of,
            seed: 0,
        };
        let pivots = reference_pivots(&g, &h);
        let w = extract_witnesses(&g, &exact, &pivots, 0, 6).unwrap();
        let lw = &w.levels[1];
        assert_eq!(lw.src, Some((2, 3)));
        assert_eq!(lw.dst, Some((4, 3)));
        // Brute-force the minimality: no earlier path vertex is within one
        // hop of the sampled set.
        for idx in 0..2 {
            assert!(pivots[1].dist[w.path[idx] as usize] > Dist(1));
        }
    }

    #[test]
    fn disconnected_pair_is_an_error() {
        let (g, _) = Graph::from_edge_list(&[(0, 1), (2, 3)], 4).unwrap();
        let exact = exact_apsp(&g);
        let h = build_hierarchy(4, 1).unwrap();
        let pivots = reference_pivots(&g, &h);
        assert!(extract_witnesses(&g, &exact, &pivots, 0, 3).is_err());
    }

    #[test]
    fn canonical_path_prefers_smallest_ids() {
        // 0-1-3 and 0-2-3 are both shortest; the canonical path takes 1.
        let (g, _) = Graph::from_edge_list(&[(0, 1), (0, 2), (1, 3), (2, 3)], 4).unwrap();
        let exact = exact_apsp(&g);
        let parents = canonical_parents(&g, 0, &exact);
        let path = canonical_path(0, 3, &parents, &exact).unwrap();
        assert_eq!(path, vec![0, 1, 3]);
    }

    #[test]
    fn shortest_path_enumeration_counts() {
        let (g, _) = Graph::from_edge_list(&[(0, 1), (0, 2), (1, 3), (2, 3)], 4).unwrap();
        let exact = exact_apsp(&g);
        let paths = enumerate_shortest_paths(&g, &exact, 0, 3, 100);
        assert_eq!(paths.len(), 2);
        for p in &paths {
            assert_eq!(p.len(), 3);
        }
    }
}
