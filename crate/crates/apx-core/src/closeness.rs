//! The closeness-enforcement passes: per-source overlay relaxation
//! (`update_from`), pivot triangulation, and the three-part procedure that
//! runs both for every level.
//!
//! Parts are barriers. Inside a part every source reads the part-start
//! snapshot and writes through atomic minimum, so results are identical for
//! any thread count and every inequality the sequential schedule guarantees
//! still holds (estimates can only come out lower).

use crate::dist::{Dist, Vertex};
use crate::estimate::{DistMatrix, EstimateMatrix, PhaseWork};
use crate::graph::Graph;
use crate::pivots::PivotLevel;
use crate::sssp::{dijkstra_overlay_into, DijkstraScratch, OverlayGraph, WeightedAdjacency};
use rayon::prelude::*;
use std::sync::Arc;

/// Builds the weighted pivot arcs shared by every overlay: for each vertex x
/// and level j, [x, pivot_j(x)] with its exact distance, in both directions.
/// Zero-distance self arcs are skipped.
pub fn build_pivot_arcs(n: usize, pivots: &[PivotLevel]) -> WeightedAdjacency {
    let mut arcs: Vec<(Vertex, Vertex, Dist)> = Vec::new();
    for level in pivots {
        for x in 0..n as Vertex {
            if level.defined(x) {
                let p = level.pivot[x as usize];
                let d = level.dist[x as usize];
                if p != x {
                    arcs.push((x, p, d));
                    arcs.push((p, x, d));
                }
            }
        }
    }
    WeightedAdjacency::from_arcs(n, &arcs)
}

/// One overlay relaxation from `w`: star edges carry `w`'s snapshot row,
/// the base is the level's degree-filtered subgraph, pivot arcs are shared.
/// Emits relax(w, x, dist) for every vertex the overlay reaches.
pub fn update_from(
    w: Vertex,
    filtered: &Graph,
    pivot_arcs: &WeightedAdjacency,
    snap: &DistMatrix,
    est: &EstimateMatrix,
    scratch: &mut DijkstraScratch,
) -> PhaseWork {
    let n = snap.n();
    let row: Vec<Dist> = (0..n as Vertex).map(|t| snap.get(w, t)).collect();
    let overlay = OverlayGraph {
        base: filtered,
        star: Some((w, &row)),
        extra: Some(pivot_arcs),
    };
    let stats = dijkstra_overlay_into(&overlay, w, scratch);
    let mut attempts = 0;
    for &x in scratch.touched() {
        if x != w {
            est.relax(w, x, scratch.dist[x as usize]);
            attempts += 1;
        }
    }
    PhaseWork {
        relax_attempts: attempts,
        edges_scanned: stats.edges_scanned,
    }
}

/// `update_from` for every source, against one shared part-start snapshot.
pub fn update_pass(
    sources: &[Vertex],
    filtered: &Graph,
    pivot_arcs: &WeightedAdjacency,
    est: &EstimateMatrix,
) -> PhaseWork {
    let snap = est.snapshot();
    let n = est.n();
    sources
        .par_iter()
        .map_init(
            || DijkstraScratch::new(n),
            |scratch, &w| update_from(w, filtered, pivot_arcs, &snap, est, scratch),
        )
        .reduce(PhaseWork::default, PhaseWork::merge)
}

/// Triangulation of one source through its level pivot: for every t,
/// relax(s, t, d(s, pivot) + est(pivot, t)). No-op when the pivot is
/// undefined.
pub fn triangulate(
    s: Vertex,
    pivots: &PivotLevel,
    snap: &DistMatrix,
    est: &EstimateMatrix,
) -> PhaseWork {
    if !pivots.defined(s) {
        return PhaseWork::default();
    }
    let p = pivots.pivot[s as usize];
    let pd = pivots.dist[s as usize];
    let n = snap.n();
    let mut attempts = 0;
    for t in 0..n as Vertex {
        if t == s {
            continue;
        }
        let cand = pd + snap.get(p, t);
        if cand.is_finite() {
            est.relax(s, t, cand);
            attempts += 1;
        }
    }
    PhaseWork {
        relax_attempts: attempts,
        edges_scanned: 0,
    }
}

/// Triangulation of every vertex at one level, against one shared snapshot.
pub fn triangulate_pass(pivots: &PivotLevel, est: &EstimateMatrix) -> PhaseWork {
    let snap = est.snapshot();
    let n = est.n();
    (0..n as Vertex)
        .into_par_iter()
        .map(|s| triangulate(s, pivots, &snap, est))
        .reduce(PhaseWork::default, PhaseWork::merge)
}

/// The full three-part procedure for every level: two identical overlay
/// passes over the level set (the second pass reads the first pass's
/// results), then triangulation of every vertex. `on_part` observes each
/// completed part for the run report.
#[allow(clippy::too_many_arguments)]
pub fn ensure_closeness(
    level_sets: &[Vec<Vertex>],
    level_filters: &[Arc<Graph>],
    pivots: &[PivotLevel],
    pivot_arcs: &WeightedAdjacency,
    est: &EstimateMatrix,
    mut on_part: impl FnMut(String, PhaseWork),
) {
    for (i, sources) in level_sets.iter().enumerate() {
        let filtered = &level_filters[i];
        let w1 = update_pass(sources, filtered, pivot_arcs, est);
        on_part(format!("closeness_l{i}_p1"), w1);
        let w2 = update_pass(sources, filtered, pivot_arcs, est);
        on_part(format!("closeness_l{i}_p2"), w2);
        let w3 = triangulate_pass(&pivots[i], est);
        on_part(format!("closeness_l{i}_p3"), w3);
    }
}
