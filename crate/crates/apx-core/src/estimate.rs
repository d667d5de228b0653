//! The shared symmetric estimate matrix, its initializers, and the
//! low-degree two-approximation step.
//!
//! Every entry is a sound upper bound: the only way a value enters the
//! matrix is `relax` with the length of a real walk in the input graph, and
//! entries only ever decrease.

use crate::dist::{Dist, Vertex, INFINITY};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pivots::{BallLevel, PivotLevel};
use crate::rng::{domain, keyed_bernoulli};
use crate::sssp::{bfs_capped_into, multi_source_bfs, BfsScratch};
use rayon::prelude::*;
use std::io::{Read, Write};
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};

#[inline]
fn packed_index(s: Vertex, t: Vertex) -> usize {
    let (a, b) = if s <= t { (s, t) } else { (t, s) };
    (b as usize) * (b as usize + 1) / 2 + a as usize
}

fn packed_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Plain packed symmetric distance matrix (snapshots, exact oracle output).
#[derive(Clone, PartialEq, Eq)]
pub struct DistMatrix {
    n: usize,
    cells: Box<[u32]>,
}

impl DistMatrix {
    pub fn filled(n: usize, value: Dist) -> Self {
        DistMatrix {
            n,
            cells: vec![value.0; packed_len(n)].into_boxed_slice(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, s: Vertex, t: Vertex) -> Dist {
        Dist(self.cells[packed_index(s, t)])
    }

    #[inline]
    pub fn set(&mut self, s: Vertex, t: Vertex, d: Dist) {
        self.cells[packed_index(s, t)] = d.0;
    }

    /// Mutable row fill helper: sets (s, t) for all t from a full row.
    pub fn set_row_from(&mut self, s: Vertex, row: &[Dist]) {
        for (t, &d) in row.iter().enumerate() {
            self.set(s, t as Vertex, d);
        }
    }

    pub fn digest(&self) -> u64 {
        fnv1a64(self.n as u64, &self.cells)
    }
}

impl std::fmt::Debug for DistMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DistMatrix(n={})", self.n)
    }
}

/// The live estimate matrix. Symmetric half storage; concurrent relaxations
/// merge through atomic minimum, so the final state is independent of
/// scheduling order.
pub struct EstimateMatrix {
    n: usize,
    cells: Box<[AtomicU32]>,
}

impl EstimateMatrix {
    pub fn new(n: usize) -> Self {
        let mut cells = Vec::with_capacity(packed_len(n));
        for t in 0..n {
            for s in 0..=t {
                cells.push(AtomicU32::new(if s == t { 0 } else { u32::MAX }));
            }
        }
        EstimateMatrix {
            n,
            cells: cells.into_boxed_slice(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, s: Vertex, t: Vertex) -> Dist {
        Dist(self.cells[packed_index(s, t)].load(Ordering::Relaxed))
    }

    /// est(s,t) = est(t,s) = min(old, val); the diagonal stays pinned at 0.
    /// Returns whether the entry decreased.
    #[inline]
    pub fn relax(&self, s: Vertex, t: Vertex, val: Dist) -> bool {
        if s == t {
            return false;
        }
        let prev = self.cells[packed_index(s, t)].fetch_min(val.0, Ordering::Relaxed);
        prev > val.0
    }

    pub fn snapshot(&self) -> DistMatrix {
        let cells: Vec<u32> = self
            .cells
            .iter()
            .map(|c| c.load(Ordering::Relaxed))
            .collect();
        DistMatrix {
            n: self.n,
            cells: cells.into_boxed_slice(),
        }
    }

    pub fn from_snapshot(snap: &DistMatrix) -> EstimateMatrix {
        let cells: Vec<AtomicU32> = snap.cells.iter().map(|&c| AtomicU32::new(c)).collect();
        EstimateMatrix {
            n: snap.n,
            cells: cells.into_boxed_slice(),
        }
    }

    /// Number of entries strictly below the snapshot (off-diagonal pairs).
    pub fn improved_since(&self, snap: &DistMatrix) -> u64 {
        debug_assert_eq!(self.n, snap.n);
        self.cells
            .iter()
            .zip(snap.cells.iter())
            .filter(|(live, &old)| live.load(Ordering::Relaxed) < old)
            .count() as u64
    }

    pub fn digest(&self) -> u64 {
        self.snapshot().digest()
    }

    /// Binary dump: magic, n (u32 LE), then the full n*n row-major matrix of
    /// u32 LE entries (the packed half expanded symmetrically).
    pub fn dump<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MATRIX_MAGIC)?;
        w.write_all(&(self.n as u32).to_le_bytes())?;
        let mut buf = Vec::with_capacity(self.n * 4);
        for s in 0..self.n as Vertex {
            buf.clear();
            for t in 0..self.n as Vertex {
                buf.extend_from_slice(&self.get(s, t).0.to_le_bytes());
            }
            w.write_all(&buf)?;
        }
        Ok(())
    }

    /// Reads a dump back into packed form (upper triangle of the stored
    /// row-major matrix).
    pub fn load<R: Read>(mut r: R) -> Result<EstimateMatrix> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MATRIX_MAGIC {
            return Err(Error::BadDump("bad magic".into()));
        }
        let mut nbuf = [0u8; 4];
        r.read_exact(&mut nbuf)?;
        let n = u32::from_le_bytes(nbuf) as usize;
        let mut data = vec![0u8; n * n * 4];
        r.read_exact(&mut data)?;
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing)? != 0 {
            return Err(Error::BadDump("trailing bytes".into()));
        }
        let m = EstimateMatrix::new(n);
        for s in 0..n {
            for t in s..n {
                let off = (s * n + t) * 4;
                let v = u32::from_le_bytes(data[off..off + 4].try_into().unwrap());
                if s != t {
                    m.cells[packed_index(s as Vertex, t as Vertex)].store(v, Ordering::Relaxed);
                }
            }
        }
        Ok(m)
    }
}

pub const MATRIX_MAGIC: &[u8; 8] = b"APXMAT01";

pub fn fnv1a64(seed_word: u64, cells: &[u32]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    let mut eat = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    eat(seed_word);
    for &c in cells {
        eat(c as u64);
    }
    h
}

/// Cumulative work counters for one phase.
#[derive(Clone, Copy, Debug, Default)]
pub struct PhaseWork {
    pub relax_attempts: u64,
    pub edges_scanned: u64,
}

impl PhaseWork {
    pub fn merge(self, other: PhaseWork) -> PhaseWork {
        PhaseWork {
            relax_attempts: self.relax_attempts + other.relax_attempts,
            edges_scanned: self.edges_scanned + other.edges_scanned,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitVariant {
    /// n BFS runs; exact distances. Reference initializer.
    Exact,
    /// Hitting-set + low-degree-subgraph additive-2 initializer.
    Additive2,
    /// Exact distances published as 2d+1: the weakest matrix the (2,1)
    /// contract allows. Diagnostic/testing initializer; makes the later
    /// pipeline phases do all the work.
    Pessimistic21,
}

impl std::str::FromStr for InitVariant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" => Ok(InitVariant::Exact),
            "additive2" => Ok(InitVariant::Additive2),
            "pessimistic21" => Ok(InitVariant::Pessimistic21),
            other => Err(format!(
                "unknown init variant {other:?} (expected exact|additive2|pessimistic21)"
            )),
        }
    }
}

/// Builds the initial matrix satisfying d <= est <= 2d+1 for every pair.
pub fn init_21_approx(g: &Graph, variant: InitVariant) -> (EstimateMatrix, PhaseWork) {
    let est = EstimateMatrix::new(g.vertex_count());
    let work = init_21_approx_into(g, &est, variant);
    (est, work)
}

/// `init_21_approx` into an existing (fresh) matrix.
pub fn init_21_approx_into(g: &Graph, est: &EstimateMatrix, variant: InitVariant) -> PhaseWork {
    let n = g.vertex_count();
    let mut work = PhaseWork::default();
    match variant {
        InitVariant::Exact | InitVariant::Pessimistic21 => {
            let pessimistic = variant == InitVariant::Pessimistic21;
            let totals: (u64, u64) = (0..n as Vertex)
                .into_par_iter()
                .map_init(
                    || BfsScratch::new(n),
                    |scratch, s| {
                        let stats = bfs_capped_into(g, s, None, INFINITY, scratch);
                        let mut attempts = 0;
                        for &t in scratch.touched() {
                            if t > s {
                                let d = scratch.dist[t as usize];
                                let val = if pessimistic { Dist(2 * d.0 + 1) } else { d };
                                est.relax(s, t, val);
                                attempts += 1;
                            }
                        }
                        (attempts, stats.edges_scanned)
                    },
                )
                .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
            work.relax_attempts += totals.0;
            work.edges_scanned += totals.1;
        }
        InitVariant::Additive2 => {
            work = work.merge(init_additive2(g, est));
        }
    }
    work
}

/// Degree threshold separating "high" vertices for the additive-2
/// initializer: about sqrt(n log n).
fn additive2_threshold(n: usize) -> u32 {
    let log_n = ceil_log2(n);
    (((n as f64) * (log_n as f64)).sqrt().ceil() as u32).max(1)
}

pub fn ceil_log2(n: usize) -> u32 {
    let n = n.max(2) as u64;
    n.ilog2() + u32::from(!n.is_power_of_two())
}

fn init_additive2(g: &Graph, est: &EstimateMatrix) -> PhaseWork {
    let n = g.vertex_count();
    let mut work = PhaseWork::default();

    // Direct edges are walks of length 1.
    for (u, v) in g.edges() {
        est.relax(u, v, Dist(1));
        work.relax_attempts += 1;
    }

    let threshold = additive2_threshold(n);
    let high: Vec<Vertex> = (0..n as Vertex)
        .filter(|&v| g.degree(v) >= threshold)
        .collect();

    if !high.is_empty() {
        let dominators = greedy_hitting_set(g, &high);
        let rows: Vec<Vec<Dist>> = dominators
            .par_iter()
            .map_init(
                || BfsScratch::new(n),
                |scratch, &u| {
                    bfs_capped_into(g, u, None, INFINITY, scratch);
                    scratch.dist.clone()
                },
            )
            .collect();
        work.edges_scanned += (rows.len() * 2 * g.edge_count()) as u64;
        // Exact rows from every dominator.
        for (row, &u) in rows.iter().zip(&dominators) {
            for t in 0..n as Vertex {
                if row[t as usize].is_finite() {
                    est.relax(u, t, row[t as usize]);
                    work.relax_attempts += 1;
                }
            }
        }
        // Every pair routed through its best dominator.
        let attempts: u64 = (0..n as Vertex)
            .into_par_iter()
            .map(|s| {
                let mut attempts = 0u64;
                for t in (s + 1)..n as Vertex {
                    let mut best = INFINITY;
                    for row in &rows {
                        best = best.min(row[s as usize] + row[t as usize]);
                    }
                    if best.is_finite() {
                        est.relax(s, t, best);
                        attempts += 1;
                    }
                }
                attempts
            })
            .sum();
        work.relax_attempts += attempts;
    }

    // Exact distances inside the subgraph induced by low-degree vertices.
    let low_edges: Vec<(Vertex, Vertex)> = g
        .edges()
        .filter(|&(u, v)| g.degree(u) < threshold && g.degree(v) < threshold)
        .collect();
    let (g_low, _) = Graph::from_edge_list(&low_edges, n).expect("valid filtered edges");
    let totals: (u64, u64) = (0..n as Vertex)
        .into_par_iter()
        .map_init(
            || BfsScratch::new(n),
            |scratch, s| {
                if g_low.degree(s) == 0 {
                    return (0, 0);
                }
                let stats = bfs_capped_into(&g_low, s, None, INFINITY, scratch);
                let mut attempts = 0;
                for &t in scratch.touched() {
                    if t > s {
                        est.relax(s, t, scratch.dist[t as usize]);
                        attempts += 1;
                    }
                }
                (attempts, stats.edges_scanned)
            },
        )
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    work.relax_attempts += totals.0;
    work.edges_scanned += totals.1;
    work
}

/// Greedy hitting set: dominate every listed vertex through its closed
/// neighborhood, largest remaining coverage first, ties to the smallest id.
fn greedy_hitting_set(g: &Graph, targets: &[Vertex]) -> Vec<Vertex> {
    let n = g.vertex_count();
    let mut is_target = vec![false; n];
    for &t in targets {
        is_target[t as usize] = true;
    }
    let mut uncovered = targets.len();
    let mut covered = vec![false; n];
    let mut score = vec![0u32; n];
    for &t in targets {
        score[t as usize] += 1;
        for &v in g.neighbors(t) {
            score[v as usize] += 1;
        }
    }
    let mut picked = Vec::new();
    while uncovered > 0 {
        let mut best = 0usize;
        for v in 1..n {
            if score[v] > score[best] {
                best = v;
            }
        }
        if score[best] == 0 {
            break; // isolated targets dominate themselves below
        }
        picked.push(best as Vertex);
        // Mark every target in N[best] as covered and decay scores.
        let mut newly: Vec<Vertex> = Vec::new();
        if is_target[best] && !covered[best] {
            newly.push(best as Vertex);
        }
        for &t in g.neighbors(best as Vertex) {
            if is_target[t as usize] && !covered[t as usize] {
                newly.push(t);
            }
        }
        for t in newly {
            covered[t as usize] = true;
            uncovered -= 1;
            score[t as usize] -= 1;
            for &v in g.neighbors(t) {
                score[v as usize] -= 1;
            }
        }
    }
    picked
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowDegBackend {
    /// BFS from every vertex of the filtered subgraph: exact, the reference.
    ExactOnSubgraph,
    /// Sampled hierarchy: exact sample rows + closed balls + collisions.
    Bk,
}

impl std::str::FromStr for LowDegBackend {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" | "exact-on-subgraph" => Ok(LowDegBackend::ExactOnSubgraph),
            "bk" => Ok(LowDegBackend::Bk),
            other => Err(format!(
                "unknown low-degree backend {other:?} (expected exact|bk)"
            )),
        }
    }
}

/// Default edge-degree threshold for the low-degree step.
pub fn lowdeg_default_tau(n: usize, c_deg: u32) -> u32 {
    let sqrt_n = (n as f64).sqrt().ceil() as u64;
    ((c_deg as u64) * sqrt_n * ceil_log2(n) as u64).min(u32::MAX as u64) as u32
}

/// Outcome flags for the low-degree step.
#[derive(Clone, Copy, Debug, Default)]
pub struct LowDegOutcome {
    pub work: PhaseWork,
    /// True when the bk backend hit a ball-size blowup and re-ran exact.
    pub fell_back_to_exact: bool,
}

/// Two-approximates every pair that has a shortest path surviving in the
/// edge-degree-filtered subgraph.
pub fn low_degree_apsp(
    g: &Graph,
    est: &EstimateMatrix,
    tau: u32,
    backend: LowDegBackend,
    seed: u64,
) -> LowDegOutcome {
    let h = g.degree_filtered_view(tau);
    if h.edge_count() == 0 {
        return LowDegOutcome::default();
    }
    match backend {
        LowDegBackend::ExactOnSubgraph => LowDegOutcome {
            work: lowdeg_exact(&h, est),
            fell_back_to_exact: false,
        },
        LowDegBackend::Bk => match lowdeg_sampled(&h, est, seed) {
            Some(work) => LowDegOutcome {
                work,
                fell_back_to_exact: false,
            },
            None => LowDegOutcome {
                work: lowdeg_exact(&h, est),
                fell_back_to_exact: true,
            },
        },
    }
}

fn lowdeg_exact(h: &Graph, est: &EstimateMatrix) -> PhaseWork {
    let n = h.vertex_count();
    let totals: (u64, u64) = (0..n as Vertex)
        .into_par_iter()
        .map_init(
            || BfsScratch::new(n),
            |scratch, s| {
                if h.degree(s) == 0 {
                    return (0, 0);
                }
                let stats = bfs_capped_into(h, s, None, INFINITY, scratch);
                let mut attempts = 0;
                for &t in scratch.touched() {
                    if t > s {
                        est.relax(s, t, scratch.dist[t as usize]);
                        attempts += 1;
                    }
                }
                (attempts, stats.edges_scanned)
            },
        )
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    PhaseWork {
        relax_attempts: totals.0,
        edges_scanned: totals.1,
    }
}

/// Sampled two-approximation on the filtered subgraph. For every pair, either
/// one endpoint's nearest sample is within half the distance (route through
/// it: <= 2d), or both closed balls reach the path midpoint and the collision
/// pass records the exact distance.
fn lowdeg_sampled(h: &Graph, est: &EstimateMatrix, seed: u64) -> Option<PhaseWork> {
    let n = h.vertex_count();
    let mut work = PhaseWork::default();
    let rate = (ceil_log2(n) as f64 / (n as f64).sqrt()).min(1.0);
    let sample: Vec<Vertex> = (0..n as Vertex)
        .filter(|&v| keyed_bernoulli(seed, domain::LOWDEG_SAMPLE, v as u64, 0, rate))
        .collect();
    if sample.is_empty() {
        return None;
    }
    let ball_cap = 64usize.saturating_mul((n as f64).sqrt() as usize) * ceil_log2(n) as usize;

    // Exact rows from every sample vertex.
    let mut sample_index = vec![u32::MAX; n];
    for (i, &s) in sample.iter().enumerate() {
        sample_index[s as usize] = i as u32;
    }
    let rows: Vec<Vec<Dist>> = sample
        .par_iter()
        .map_init(
            || BfsScratch::new(n),
            |scratch, &s| {
                bfs_capped_into(h, s, None, INFINITY, scratch);
                scratch.dist.clone()
            },
        )
        .collect();
    work.edges_scanned += (rows.len() * 2 * h.edge_count()) as u64;
    let row_attempts = AtomicU64::new(0);
    rows.par_iter()
        .zip(sample.par_iter())
        .for_each(|(row, &s)| {
            let mut attempts = 0;
            for t in 0..n as Vertex {
                if row[t as usize].is_finite() {
                    est.relax(s, t, row[t as usize]);
                    attempts += 1;
                }
            }
            row_attempts.fetch_add(attempts, Ordering::Relaxed);
        });
    work.relax_attempts += row_attempts.load(Ordering::Relaxed);

    // Nearest sample per vertex.
    let (near_dist, near_origin) = multi_source_bfs(h, &sample);
    work.edges_scanned += 2 * h.edge_count() as u64;

    // Route every pair through the cheaper endpoint's nearest sample.
    let attempts: u64 = (0..n as Vertex)
        .into_par_iter()
        .map(|u| {
            let o = near_origin[u as usize];
            if o == u32::MAX {
                return 0;
            }
            let row = &rows[sample_index[o as usize] as usize];
            let du = near_dist[u as usize];
            let mut attempts = 0u64;
            for v in 0..n as Vertex {
                let cand = du + row[v as usize];
                if cand.is_finite() {
                    est.relax(u, v, cand);
                    attempts += 1;
                }
            }
            attempts
        })
        .sum();
    work.relax_attempts += attempts;

    // Closed balls up to (and including) the nearest-sample radius.
    type BallRow = (Vec<Vertex>, Vec<Dist>, u64);
    let mut balls: Vec<(Vec<Vertex>, Vec<Dist>)> = Vec::with_capacity(n);
    {
        let results: Vec<Option<BallRow>> = (0..n as Vertex)
            .into_par_iter()
            .map_init(
                || BfsScratch::new(n),
                |scratch, u| {
                    if h.degree(u) == 0 {
                        return Some((Vec::new(), Vec::new(), 0));
                    }
                    let cap = near_dist[u as usize];
                    let stats = bfs_capped_into(h, u, None, cap, scratch);
                    if scratch.touched().len() > ball_cap {
                        return None;
                    }
                    let members: Vec<Vertex> = scratch.touched().to_vec();
                    let dists = members.iter().map(|&v| scratch.dist[v as usize]).collect();
                    Some((members, dists, stats.edges_scanned))
                },
            )
            .collect();
        for r in results {
            match r {
                Some((m, d, e)) => {
                    work.edges_scanned += e;
                    balls.push((m, d));
                }
                None => return None, // blowup: caller falls back to exact
            }
        }
    }

    // Exact distances inside each closed ball.
    let ball_attempts = AtomicU64::new(0);
    balls
        .par_iter()
        .enumerate()
        .for_each(|(u, (members, dists))| {
            let mut attempts = 0;
            for (&v, &d) in members.iter().zip(dists.iter()) {
                est.relax(u as Vertex, v, d);
                attempts += 1;
            }
            ball_attempts.fetch_add(attempts, Ordering::Relaxed);
        });
    work.relax_attempts += ball_attempts.load(Ordering::Relaxed);

    // Collision pass: any vertex inside two closed balls certifies the exact
    // concatenated distance for that pair.
    let mut owners_count = vec![0usize; n];
    for (members, _) in &balls {
        for &w in members {
            owners_count[w as usize] += 1;
        }
    }
    let mut owner_offsets = Vec::with_capacity(n + 1);
    let mut acc = 0;
    owner_offsets.push(0);
    for c in &owners_count {
        acc += c;
        owner_offsets.push(acc);
    }
    let mut owner_vertex = vec![0 as Vertex; acc];
    let mut owner_dist = vec![Dist(0); acc];
    let mut cursor = owner_offsets.clone();
    for (u, (members, dists)) in balls.iter().enumerate() {
        for (&w, &d) in members.iter().zip(dists.iter()) {
            owner_vertex[cursor[w as usize]] = u as Vertex;
            owner_dist[cursor[w as usize]] = d;
            cursor[w as usize] += 1;
        }
    }
    let attempts: u64 = (0..n)
        .into_par_iter()
        .map(|w| {
            let lo = owner_offsets[w];
            let hi = owner_offsets[w + 1];
            let mut attempts = 0u64;
            for i in lo..hi {
                for j in (i + 1)..hi {
                    let cand = owner_dist[i] + owner_dist[j];
                    est.relax(owner_vertex[i], owner_vertex[j], cand);
                    attempts += 1;
                }
            }
            attempts
        })
        .sum();
    work.relax_attempts += attempts;

    Some(work)
}

/// Publishes the exact pivot and ball distances into the matrix.
pub fn seed_pivot_distances(
    est: &EstimateMatrix,
    pivots: &[PivotLevel],
    balls: &[BallLevel],
) -> PhaseWork {
    let mut work = PhaseWork::default();
    let n = est.n();
    for level in pivots {
        for s in 0..n as Vertex {
            if level.defined(s) && level.dist[s as usize] > Dist(0) {
                est.relax(s, level.pivot[s as usize], level.dist[s as usize]);
                work.relax_attempts += 1;
            }
        }
    }
    for level in balls {
        for s in 0..n as Vertex {
            let (members, dists) = level.ball(s);
            for (&v, &d) in members.iter().zip(dists.iter()) {
                if v != s {
                    est.relax(s, v, d);
                    work.relax_attempts += 1;
                }
            }
        }
    }
    work
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family, GeneratorSpec};
    use crate::sssp::bfs_sssp;

    fn path_graph(n: usize) -> Graph {
        let edges: Vec<_> = (0..n as Vertex - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edge_list(&edges, n).unwrap().0
    }

    fn exact_rows(g: &Graph) -> Vec<Vec<Dist>> {
        (0..g.vertex_count() as Vertex)
            .map(|s| bfs_sssp(g, s, None))
            .collect()
    }

    #[test]
    fn relax_is_monotone_and_symmetric() {
        let est = EstimateMatrix::new(4);
        assert!(est.relax(0, 1, Dist(9)));
        assert!(est.relax(0, 1, Dist(7)));
        assert_eq!(est.get(0, 1), Dist(7));
        assert_eq!(est.get(1, 0), Dist(7));
        assert!(!est.relax(1, 0, Dist(9)));
        assert_eq!(est.get(0, 1), Dist(7));
        // Diagonal pinned.
        assert!(!est.relax(2, 2, Dist(3)));
        assert_eq!(est.get(2, 2), Dist(0));
    }

    #[test]
    fn exact_init_is_exact() {
        let g = path_graph(5);
        let (est, _) = init_21_approx(&g, InitVariant::Exact);
        assert_eq!(est.get(0, 4), Dist(4));
        assert_eq!(est.get(2, 2), Dist(0));
    }

    #[test]
    fn additive2_gap_within_two() {
        for (n, p, seed) in [(80usize, 0.08, 1u64), (150, 0.04, 2)] {
            let mut spec = GeneratorSpec::new(Family::Gnp, n, seed);
            spec.p = p;
            let g = generate(&spec).unwrap();
            let rows = exact_rows(&g);
            let (est, _) = init_21_approx(&g, InitVariant::Additive2);
            for s in 0..n as Vertex {
                for t in 0..n as Vertex {
                    let d = rows[s as usize][t as usize];
                    let e = est.get(s, t);
                    if d.is_finite() {
                        assert!(e >= d, "unsound at ({s},{t})");
                        assert!(e.0 <= d.0 + 2, "gap > 2 at ({s},{t}): est {e:?} d {d:?}");
                    } else {
                        assert_eq!(e, INFINITY);
                    }
                }
            }
        }
    }

    #[test]
    fn additive2_single_edge_bound() {
        let (g, _) = Graph::from_edge_list(&[(0, 1)], 2).unwrap();
        let (est, _) = init_21_approx(&g, InitVariant::Additive2);
        assert!(est.get(0, 1).0 <= 3);
    }

    #[test]
    fn pessimistic_matches_twice_plus_one() {
        let g = path_graph(6);
        let (est, _) = init_21_approx(&g, InitVariant::Pessimistic21);
        assert_eq!(est.get(0, 5), Dist(11));
        assert_eq!(est.get(1, 2), Dist(3));
    }

    #[test]
    fn lowdeg_exact_on_path_gives_exact() {
        let g = path_graph(5);
        let est = EstimateMatrix::new(5);
        low_degree_apsp(&g, &est, 2, LowDegBackend::ExactOnSubgraph, 0);
        assert_eq!(est.get(0, 4), Dist(4));
    }

    #[test]
    fn lowdeg_tau_zero_is_a_noop() {
        let g = path_graph(5);
        let est = EstimateMatrix::new(5);
        let out = low_degree_apsp(&g, &est, 0, LowDegBackend::ExactOnSubgraph, 0);
        assert_eq!(out.work.relax_attempts, 0);
        assert_eq!(est.get(0, 1), INFINITY);
    }

    #[test]
    fn lowdeg_bk_two_approximates_qualifying_pairs() {
        let mut spec = GeneratorSpec::new(Family::Gnp, 300, 1);
        spec.p = 0.03;
        let g = generate(&spec).unwrap();
        let tau = lowdeg_default_tau(300, 4);
        let h = g.degree_filtered_view(tau);
        let g_rows = exact_rows(&g);
        let h_rows = exact_rows(&h);
        let est = EstimateMatrix::new(300);
        let out = low_degree_apsp(&g, &est, tau, LowDegBackend::Bk, 1);
        assert!(!out.fell_back_to_exact);
        for s in 0..300u32 {
            for t in 0..300u32 {
                let d = g_rows[s as usize][t as usize];
                if s != t && d.is_finite() && h_rows[s as usize][t as usize] == d {
                    let e = est.get(s, t);
                    assert!(e >= d);
                    assert!(e.0 <= 2 * d.0, "({s},{t}): est {e:?} d {d:?}");
                }
            }
        }
    }

    #[test]
    fn bk_backend_is_sound_everywhere() {
        let mut spec = GeneratorSpec::new(Family::Gnp, 200, 8);
        spec.p = 0.05;
        let g = generate(&spec).unwrap();
        let rows = exact_rows(&g);
        let est = EstimateMatrix::new(200);
        low_degree_apsp(&g, &est, lowdeg_default_tau(200, 4), LowDegBackend::Bk, 8);
        for s in 0..200u32 {
            for t in 0..200u32 {
                assert!(est.get(s, t) >= rows[s as usize][t as usize]);
            }
        }
    }

    #[test]
    fn seeded_pivot_and_ball_entries_are_exact() {
        use crate::pivots::{compute_balls, compute_pivots, PivotMode};
        use crate::sampling::build_hierarchy;
        let mut spec = GeneratorSpec::new(Family::Gnp, 150, 4);
        spec.p = 0.05;
        let g = generate(&spec).unwrap();
        let h = build_hierarchy(150, 4).unwrap();
        let rows = exact_rows(&g);
        let est = EstimateMatrix::new(150);
        let mut pivots = Vec::new();
        let mut balls = Vec::new();
        for i in 0..h.level_count() {
            let (p, _) = compute_pivots(&g, &h, i, PivotMode::Reference, 0).unwrap();
            let (b, _) = compute_balls(&g, &p);
            pivots.push(p);
            balls.push(b);
        }
        seed_pivot_distances(&est, &pivots, &balls);
        for level in &pivots {
            for s in 0..150u32 {
                if level.defined(s) {
                    let p = level.pivot[s as usize];
                    if p != s {
                        assert_eq!(est.get(s, p), rows[s as usize][p as usize]);
                    }
                }
            }
        }
        for level in &balls {
            for s in 0..150u32 {
                let (members, _) = level.ball(s);
                for &v in members {
                    if v != s {
                        assert_eq!(est.get(s, v), rows[s as usize][v as usize]);
                    }
                }
            }
        }
    }

    #[test]
    fn dump_round_trip_preserves_entries_and_digest() {
        let g = path_graph(7);
        let (est, _) = init_21_approx(&g, InitVariant::Exact);
        let mut buf = Vec::new();
        est.dump(&mut buf).unwrap();
        assert_eq!(&buf[..8], MATRIX_MAGIC);
        let back = EstimateMatrix::load(&buf[..]).unwrap();
        assert_eq!(back.n(), 7);
        for s in 0..7u32 {
            for t in 0..7u32 {
                assert_eq!(back.get(s, t), est.get(s, t));
            }
        }
        assert_eq!(back.digest(), est.digest());
    }
}
