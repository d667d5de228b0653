//! Per-level nearest sampled vertex (pivot), the exact-distance ball strictly
//! inside it, and the inverse pivot index.
//!
//! Fast mode reproduces the intended near-quadratic computation: one BFS per
//! level vertex inside a degree-capped subgraph augmented with that vertex's
//! full neighborhood, followed by a min-reduce per target. Reference mode is
//! the exact multi-source oracle the fast tables are checked against.

use crate::dist::{Dist, Vertex, INFINITY};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sampling::{level_scale, SampleHierarchy};
use crate::sssp::{bfs_capped_into, multi_source_bfs, BfsScratch, SsspStats};
use rayon::prelude::*;
use std::sync::atomic::{AtomicU64, Ordering};

pub const UNDEFINED: Vertex = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PivotMode {
    Fast,
    Reference,
}

impl std::str::FromStr for PivotMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "fast" => Ok(PivotMode::Fast),
            "reference" => Ok(PivotMode::Reference),
            other => Err(format!(
                "unknown pivot mode {other:?} (expected fast|reference)"
            )),
        }
    }
}

/// Pivot of every vertex at one level: nearest level-set vertex (smallest id
/// on ties) with its exact distance; `UNDEFINED`/`INFINITY` when the level
/// set cannot be reached.
#[derive(Clone, Debug)]
pub struct PivotLevel {
    pub level: usize,
    pub pivot: Vec<Vertex>,
    pub dist: Vec<Dist>,
}

impl PivotLevel {
    pub fn defined(&self, s: Vertex) -> bool {
        self.pivot[s as usize] != UNDEFINED
    }
}

/// Balls at one level, CSR-shaped: for each s the vertices strictly closer
/// to s than its pivot, with exact distances.
#[derive(Clone, Debug)]
pub struct BallLevel {
    pub level: usize,
    offsets: Vec<usize>,
    members: Vec<Vertex>,
    dists: Vec<Dist>,
}

impl BallLevel {
    pub fn ball(&self, s: Vertex) -> (&[Vertex], &[Dist]) {
        let lo = self.offsets[s as usize];
        let hi = self.offsets[s as usize + 1];
        (&self.members[lo..hi], &self.dists[lo..hi])
    }

    pub fn max_ball_size(&self) -> usize {
        self.offsets
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0)
    }

    pub fn total_members(&self) -> usize {
        self.members.len()
    }
}

/// Inverse pivot index at one level: for x, the vertices whose pivot is x.
#[derive(Clone, Debug)]
pub struct PivotInverseLevel {
    pub level: usize,
    offsets: Vec<usize>,
    members: Vec<Vertex>,
}

impl PivotInverseLevel {
    pub fn assigned_to(&self, x: Vertex) -> &[Vertex] {
        &self.members[self.offsets[x as usize]..self.offsets[x as usize + 1]]
    }

    pub fn total_assigned(&self) -> usize {
        self.members.len()
    }
}

/// Degree cap for level i: c_deg * 2^(2^i) * ceil(log2 n), saturated to u32.
pub fn level_degree_cap(n: usize, level: usize, c_deg: u32) -> u32 {
    let log_n = ((n.max(2) as u64).ilog2() + u32::from(!(n.max(2)).is_power_of_two())) as u64;
    let cap = (c_deg as u64)
        .saturating_mul(level_scale(level))
        .saturating_mul(log_n);
    cap.min(u32::MAX as u64) as u32
}

pub fn compute_pivots(
    g: &Graph,
    hierarchy: &SampleHierarchy,
    level: usize,
    mode: PivotMode,
    tau: u32,
) -> Result<(PivotLevel, SsspStats)> {
    if level >= hierarchy.level_count() {
        return Err(Error::LevelOutOfRange {
            level,
            levels: hierarchy.level_count(),
        });
    }
    let n = g.vertex_count();
    if level == 0 {
        // The full vertex set: every vertex is its own nearest member.
        return Ok((
            PivotLevel {
                level,
                pivot: (0..n as Vertex).collect(),
                dist: vec![Dist(0); n],
            },
            SsspStats::default(),
        ));
    }
    let sources = &hierarchy.levels[level];
    match mode {
        PivotMode::Reference => {
            let (dist, origin) = multi_source_bfs(g, sources);
            let stats = SsspStats {
                edges_scanned: 2 * g.edge_count() as u64,
            };
            Ok((
                PivotLevel {
                    level,
                    pivot: origin,
                    dist,
                },
                stats,
            ))
        }
        PivotMode::Fast => {
            let filtered = g.degree_filtered_view(tau);
            // best[s] packs (distance, source id); fetch_min gives the
            // lexicographic minimum independent of merge order.
            let best: Vec<AtomicU64> = (0..n).map(|_| AtomicU64::new(u64::MAX)).collect();
            let edges: u64 = sources
                .par_iter()
                .map_init(
                    || BfsScratch::new(n),
                    |scratch, &w| {
                        let stats = bfs_capped_into(&filtered, w, Some((w, g)), INFINITY, scratch);
                        for &s in scratch.touched() {
                            let d = scratch.dist[s as usize];
                            let packed = ((d.0 as u64) << 32) | w as u64;
                            best[s as usize].fetch_min(packed, Ordering::Relaxed);
                        }
                        stats.edges_scanned
                    },
                )
                .sum();
            let mut pivot = vec![UNDEFINED; n];
            let mut dist = vec![INFINITY; n];
            for (s, b) in best.iter().enumerate() {
                let packed = b.load(Ordering::Relaxed);
                if packed != u64::MAX {
                    pivot[s] = packed as u32;
                    dist[s] = Dist((packed >> 32) as u32);
                }
            }
            Ok((
                PivotLevel { level, pivot, dist },
                SsspStats {
                    edges_scanned: edges,
                },
            ))
        }
    }
}

/// Balls from a computed pivot slice: per s, a BFS in the full graph that
/// expands only vertices at least two rings inside the pivot distance and
/// records the frontier one ring inside it.
pub fn compute_balls(g: &Graph, pivots: &PivotLevel) -> (BallLevel, SsspStats) {
    let n = g.vertex_count();
    let per_vertex: Vec<(Vec<Vertex>, Vec<Dist>, u64)> = (0..n as Vertex)
        .into_par_iter()
        .map_init(
            || BfsScratch::new(n),
            |scratch, s| {
                let pd = pivots.dist[s as usize];
                if !pd.is_finite() || pd == Dist(0) {
                    return (Vec::new(), Vec::new(), 0);
                }
                let stats = bfs_capped_into(g, s, None, Dist(pd.0 - 1), scratch);
                let mut members: Vec<Vertex> = scratch.touched().to_vec();
                members.sort_unstable();
                let dists = members.iter().map(|&v| scratch.dist[v as usize]).collect();
                (members, dists, stats.edges_scanned)
            },
        )
        .collect();

    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0usize);
    let mut total = 0;
    for (m, _, _) in &per_vertex {
        total += m.len();
        offsets.push(total);
    }
    let mut members = Vec::with_capacity(total);
    let mut dists = Vec::with_capacity(total);
    let mut edges = 0;
    for (m, d, e) in per_vertex {
        members.extend(m);
        dists.extend(d);
        edges += e;
    }
    (
        BallLevel {
            level: pivots.level,
            offsets,
            members,
            dists,
        },
        SsspStats {
            edges_scanned: edges,
        },
    )
}

/// Exact inverse of the pivot assignment: every vertex with a defined pivot
/// appears exactly once, under its pivot.
pub fn invert_pivots(pivots: &PivotLevel) -> PivotInverseLevel {
    let n = pivots.pivot.len();
    let mut counts = vec![0usize; n];
    for &p in &pivots.pivot {
        if p != UNDEFINED {
            counts[p as usize] += 1;
        }
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut acc = 0;
    offsets.push(0);
    for c in &counts {
        acc += c;
        offsets.push(acc);
    }
    let mut members = vec![0 as Vertex; acc];
    let mut cursor = offsets.clone();
    for (w, &p) in pivots.pivot.iter().enumerate() {
        if p != UNDEFINED {
            members[cursor[p as usize]] = w as Vertex;
            cursor[p as usize] += 1;
        }
    }
    PivotInverseLevel {
        level: pivots.level,
        offsets,
        members,
    }
}
