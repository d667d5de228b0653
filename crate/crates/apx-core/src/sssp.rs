//! Single-source shortest-path engines: plain/capped BFS, multi-source BFS,
//! and Dijkstra over weighted overlay graphs.
//!
//! All engines write into caller-owned scratch so concurrent per-source runs
//! never share mutable state.

use crate::dist::{Dist, Vertex, INFINITY};
use crate::graph::Graph;

/// Per-call statistics, used by the run report and the scaling bench.
#[derive(Clone, Copy, Debug, Default)]
pub struct SsspStats {
    pub edges_scanned: u64,
}

/// Reusable BFS state. `dist` entries are only valid for `touched` vertices;
/// everything else is `INFINITY`.
pub struct BfsScratch {
    pub dist: Vec<Dist>,
    queue: Vec<Vertex>,
    touched: Vec<Vertex>,
}

impl BfsScratch {
    pub fn new(n: usize) -> Self {
        BfsScratch {
            dist: vec![INFINITY; n],
            queue: Vec::with_capacity(n),
            touched: Vec::with_capacity(n),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v as usize] = INFINITY;
        }
        self.touched.clear();
        self.queue.clear();
    }

    pub fn touched(&self) -> &[Vertex] {
        &self.touched
    }
}

/// BFS from `source`, optionally treating `star` as an extra neighbor list of
/// `source` (used for graphs of the form "filtered edges plus all edges at
/// one vertex"). Distances strictly above `record_cap` are not recorded, and
/// vertices sitting exactly at the cap are not expanded.
pub fn bfs_capped_into(
    g: &Graph,
    source: Vertex,
    star: Option<(Vertex, &Graph)>,
    record_cap: Dist,
    scratch: &mut BfsScratch,
) -> SsspStats {
    scratch.reset();
    let mut stats = SsspStats::default();
    scratch.dist[source as usize] = Dist(0);
    scratch.touched.push(source);
    scratch.queue.push(source);
    let mut head = 0usize;
    while head < scratch.queue.len() {
        let u = scratch.queue[head];
        head += 1;
        let du = scratch.dist[u as usize];
        if du >= record_cap {
            continue;
        }
        let dv = Dist(du.0 + 1);
        let visit = |nbrs: &[Vertex], stats: &mut SsspStats, scratch: &mut BfsScratch| {
            stats.edges_scanned += nbrs.len() as u64;
            for &v in nbrs {
                if scratch.dist[v as usize] == INFINITY {
                    scratch.dist[v as usize] = dv;
                    scratch.touched.push(v);
                    scratch.queue.push(v);
                }
            }
        };
        visit(g.neighbors(u), &mut stats, scratch);
        if let Some((center, base)) = star {
            if u == center {
                visit(base.neighbors(center), &mut stats, scratch);
            }
        }
    }
    stats
}

/// Exact hop distances from `source`; vertices beyond `cap` (when given) are
/// left at `INFINITY`.
pub fn bfs_sssp(g: &Graph, source: Vertex, cap: Option<Dist>) -> Vec<Dist> {
    let mut scratch = BfsScratch::new(g.vertex_count());
    bfs_capped_into(g, source, None, cap.unwrap_or(INFINITY), &mut scratch);
    scratch.dist.clone()
}

/// Multi-source BFS: distance to the nearest source, plus for every reached
/// vertex the smallest-id source among those at exactly that distance.
///
/// Returns `(dist, origin)`; `origin[v] == u32::MAX` where unreachable.
pub fn multi_source_bfs(g: &Graph, sources: &[Vertex]) -> (Vec<Dist>, Vec<Vertex>) {
    let n = g.vertex_count();
    let mut dist = vec![INFINITY; n];
    let mut queue: Vec<Vertex> = Vec::with_capacity(n);
    for &s in sources {
        if dist[s as usize] == INFINITY {
            dist[s as usize] = Dist(0);
            queue.push(s);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        let dv = Dist(dist[u as usize].0 + 1);
        for &v in g.neighbors(u) {
            if dist[v as usize] == INFINITY {
                dist[v as usize] = dv;
                queue.push(v);
            }
        }
    }
    // Smallest-id origin, settled level by level: a vertex inherits the
    // minimum origin among neighbors one ring closer. The queue is already
    // in non-decreasing distance order.
    let mut origin = vec![u32::MAX; n];
    for &s in sources {
        origin[s as usize] = s;
    }
    for &v in &queue {
        let dv = dist[v as usize];
        if dv == Dist(0) {
            continue;
        }
        let mut best = u32::MAX;
        for &u in g.neighbors(v) {
            if dist[u as usize].0 + 1 == dv.0 {
                best = best.min(origin[u as usize]);
            }
        }
        origin[v as usize] = best;
    }
    (dist, origin)
}

/// Extra weighted undirected adjacency, CSR-shaped. Used for the pivot edges
/// of overlay graphs; built once per run and shared across sources.
#[derive(Clone, Debug, Default)]
pub struct WeightedAdjacency {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
    weights: Vec<Dist>,
}

impl WeightedAdjacency {
    /// Builds from directed (u -> v, w) triples; callers add both directions
    /// if they want undirected semantics.
    pub fn from_arcs(n: usize, arcs: &[(Vertex, Vertex, Dist)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, _, _) in arcs {
            degree[u as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut targets = vec![0; acc];
        let mut weights = vec![Dist(0); acc];
        let mut cursor = offsets.clone();
        for &(u, v, w) in arcs {
            targets[cursor[u as usize]] = v;
            weights[cursor[u as usize]] = w;
            cursor[u as usize] += 1;
        }
        WeightedAdjacency {
            offsets,
            targets,
            weights,
        }
    }

    #[inline]
    pub fn arcs_from(&self, v: Vertex) -> impl Iterator<Item = (Vertex, Dist)> + '_ {
        let lo = self.offsets[v as usize];
        let hi = self.offsets[v as usize + 1];
        self.targets[lo..hi]
            .iter()
            .copied()
            .zip(self.weights[lo..hi].iter().copied())
    }

    pub fn arc_count(&self) -> usize {
        self.targets.len()
    }
}

/// A weighted overlay: unit-weight base edges plus optional star edges from
/// one center (weights read off an estimate row) plus optional extra weighted
/// arcs. Star and extra weights are real walk lengths supplied by the caller,
/// which is what keeps every overlay distance a sound upper bound.
pub struct OverlayGraph<'a> {
    pub base: &'a Graph,
    pub star: Option<(Vertex, &'a [Dist])>,
    pub extra: Option<&'a WeightedAdjacency>,
}

/// Reusable Dijkstra state (bucket queue; weights are small integers).
pub struct DijkstraScratch {
    pub dist: Vec<Dist>,
    buckets: Vec<Vec<Vertex>>,
    touched: Vec<Vertex>,
    dirty_buckets: Vec<usize>,
    max_pushed: usize,
}

impl DijkstraScratch {
    pub fn new(n: usize) -> Self {
        DijkstraScratch {
            dist: vec![INFINITY; n],
            buckets: Vec::new(),
            touched: Vec::with_capacity(n),
            dirty_buckets: Vec::new(),
            max_pushed: 0,
        }
    }

    fn reset(&mut self, size_hint: usize) {
        for &v in &self.touched {
            self.dist[v as usize] = INFINITY;
        }
        self.touched.clear();
        for &b in &self.dirty_buckets {
            self.buckets[b].clear();
        }
        self.dirty_buckets.clear();
        self.max_pushed = 0;
        if self.buckets.len() < size_hint + 1 {
            self.buckets.resize_with(size_hint + 1, Vec::new);
        }
    }

    #[inline]
    fn push(&mut self, v: Vertex, d: Dist) {
        let b = d.0 as usize;
        if b >= self.buckets.len() {
            self.buckets.resize_with(b + 1, Vec::new);
        }
        if self.buckets[b].is_empty() {
            self.dirty_buckets.push(b);
        }
        self.buckets[b].push(v);
        self.max_pushed = self.max_pushed.max(b);
    }

    pub fn touched(&self) -> &[Vertex] {
        &self.touched
    }
}

/// Dijkstra from `source` in the overlay. Finite estimates never exceed a few
/// graph diameters, so a bucket queue indexed by distance is exact and O(1)
/// per operation.
pub fn dijkstra_overlay_into(
    h: &OverlayGraph<'_>,
    source: Vertex,
    scratch: &mut DijkstraScratch,
) -> SsspStats {
    let n = h.base.vertex_count();
    // Pipeline overlays keep distances within a few graph diameters; the
    // bucket array starts there and grows if an overlay carries wider
    // weights.
    scratch.reset(4 * n + 4);
    let mut stats = SsspStats::default();

    scratch.dist[source as usize] = Dist(0);
    scratch.touched.push(source);
    scratch.push(source, Dist(0));

    let relax = |v: Vertex, cand: Dist, scratch: &mut DijkstraScratch| {
        if cand < scratch.dist[v as usize] {
            if scratch.dist[v as usize] == INFINITY {
                scratch.touched.push(v);
            }
            scratch.dist[v as usize] = cand;
            scratch.push(v, cand);
        }
    };

    let mut b = 0usize;
    while b <= scratch.max_pushed {
        let mut i = 0;
        while i < scratch.buckets[b].len() {
            let u = scratch.buckets[b][i];
            i += 1;
            let du = scratch.dist[u as usize];
            if du.0 as usize != b {
                continue; // stale entry
            }
            stats.edges_scanned += h.base.neighbors(u).len() as u64;
            for &v in h.base.neighbors(u) {
                relax(v, du + Dist(1), scratch);
            }
            if let Some(extra) = h.extra {
                for (v, w) in extra.arcs_from(u) {
                    stats.edges_scanned += 1;
                    relax(v, du + w, scratch);
                }
            }
            if let Some((center, weights)) = h.star {
                if u == center {
                    stats.edges_scanned += weights.len() as u64;
                    for (x, &w) in weights.iter().enumerate() {
                        if w.is_finite() && x != center as usize {
                            relax(x as Vertex, du + w, scratch);
                        }
                    }
                }
            }
        }
        // Weight-0 arcs can push into the bucket being drained; the inner
        // loop re-reads len(), so advancing afterwards is safe.
        b += 1;
    }
    stats
}

/// Exact shortest distances in the overlay from `source`.
pub fn dijkstra_sssp(h: &OverlayGraph<'_>, source: Vertex) -> Vec<Dist> {
    let mut scratch = DijkstraScratch::new(h.base.vertex_count());
    dijkstra_overlay_into(h, source, &mut scratch);
    scratch.dist.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn path_graph(n: usize) -> Graph {
        let edges: Vec<_> = (0..n as Vertex - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edge_list(&edges, n).unwrap().0
    }

    fn grid_graph(rows: usize, cols: usize) -> Graph {
        let idx = |r: usize, c: usize| (r * cols + c) as Vertex;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if r + 1 < rows {
                    edges.push((idx(r, c), idx(r + 1, c)));
                }
                if c + 1 < cols {
                    edges.push((idx(r, c), idx(r, c + 1)));
                }
            }
        }
        Graph::from_edge_list(&edges, rows * cols).unwrap().0
    }

    #[test]
    fn bfs_path_distances() {
        let p5 = path_graph(5);
        let d = bfs_sssp(&p5, 0, None);
        assert_eq!(d, vec![Dist(0), Dist(1), Dist(2), Dist(3), Dist(4)]);
    }

    #[test]
    fn bfs_cap_semantics() {
        let p5 = path_graph(5);
        let d = bfs_sssp(&p5, 0, Some(Dist(2)));
        assert_eq!(d, vec![Dist(0), Dist(1), Dist(2), INFINITY, INFINITY]);
    }

    #[test]
    fn bfs_grid_corner_to_corner() {
        let g = grid_graph(10, 10);
        let d = bfs_sssp(&g, 0, None);
        assert_eq!(d[99], Dist(18));
    }

    #[test]
    fn dijkstra_shortcut_wins() {
        let p3 = path_graph(3);
        let mut star = vec![INFINITY; 3];
        star[2] = Dist(1);
        let h = OverlayGraph {
            base: &p3,
            star: Some((0, &star)),
            extra: None,
        };
        let d = dijkstra_sssp(&h, 0);
        assert_eq!(d[2], Dist(1));
        assert_eq!(d[1], Dist(1));
    }

    #[test]
    fn dijkstra_reduces_to_bfs_without_weighted_edges() {
        let g = grid_graph(5, 7);
        let h = OverlayGraph {
            base: &g,
            star: None,
            extra: None,
        };
        for s in [0u32, 3, 17, 34] {
            assert_eq!(dijkstra_sssp(&h, s), bfs_sssp(&g, s, None));
        }
    }

    #[test]
    fn multi_source_picks_smallest_origin_on_ties() {
        // 0-1-2-3-4 with sources {1,3}: vertex 2 ties, origin must be 1.
        let p5 = path_graph(5);
        let (dist, origin) = multi_source_bfs(&p5, &[1, 3]);
        assert_eq!(dist[2], Dist(1));
        assert_eq!(origin[2], 1);
        assert_eq!(origin[0], 1);
        assert_eq!(origin[4], 3);
    }
}
