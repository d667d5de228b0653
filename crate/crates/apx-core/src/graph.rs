//! Immutable undirected unweighted graphs in compressed-sparse-row form.
//!
//! The graph is the sole input object of the whole crate. Construction
//! canonicalizes the edge set: self-loops and duplicate edges are dropped
//! (and counted), neighbor lists are sorted, and every edge appears in both
//! endpoint lists.

use crate::dist::Vertex;
use crate::error::{Error, Result};
use std::io::{BufRead, Write};

#[derive(Clone, Debug)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<Vertex>,
}

/// What `from_edge_list` dropped while canonicalizing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DroppedEdges {
    pub duplicates: usize,
    pub self_loops: usize,
}

impl Graph {
    /// Builds a canonical graph from an arbitrary list of endpoint pairs.
    ///
    /// Pairs are treated as unordered; `(u,v)` and `(v,u)` are the same edge.
    pub fn from_edge_list(edges: &[(Vertex, Vertex)], n: usize) -> Result<(Graph, DroppedEdges)> {
        let mut dropped = DroppedEdges::default();
        let mut canon: Vec<(Vertex, Vertex)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u as usize >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: u as u64,
                    n,
                });
            }
            if v as usize >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: v as u64,
                    n,
                });
            }
            if u == v {
                dropped.self_loops += 1;
                continue;
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        let before = canon.len();
        canon.dedup();
        dropped.duplicates = before - canon.len();

        let mut degree = vec![0usize; n];
        for &(u, v) in &canon {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0 as Vertex; acc];
        for &(u, v) in &canon {
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Ok((Graph { offsets, neighbors }, dropped))
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> u32 {
        (self.offsets[v as usize + 1] - self.offsets[v as usize]) as u32
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// min(deg(u), deg(v)) for an existing edge (u,v).
    pub fn edge_degree(&self, u: Vertex, v: Vertex) -> Result<u32> {
        if !self.has_edge(u, v) {
            return Err(Error::NotAnEdge { u, v });
        }
        Ok(self.degree(u).min(self.degree(v)))
    }

    /// Largest edge degree in the graph, 0 if edgeless.
    pub fn max_edge_degree(&self) -> u32 {
        let mut best = 0;
        for u in 0..self.vertex_count() as Vertex {
            let du = self.degree(u);
            for &v in self.neighbors(u) {
                if v > u {
                    best = best.max(du.min(self.degree(v)));
                }
            }
        }
        best
    }

    /// Materializes the subgraph with exactly the edges of edge degree <= tau.
    ///
    /// Degrees in the threshold test are degrees in `self`, not in the view.
    /// The vertex set is unchanged.
    pub fn degree_filtered_view(&self, tau: u32) -> Graph {
        let n = self.vertex_count();
        let mut degree = vec![0usize; n];
        for u in 0..n as Vertex {
            let du = self.degree(u);
            for &v in self.neighbors(u) {
                if du.min(self.degree(v)) <= tau {
                    degree[u as usize] += 1;
                }
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut neighbors = vec![0 as Vertex; acc];
        let mut cursor = offsets.clone();
        for u in 0..n as Vertex {
            let du = self.degree(u);
            for &v in self.neighbors(u) {
                if du.min(self.degree(v)) <= tau {
                    neighbors[cursor[u as usize]] = v;
                    cursor[u as usize] += 1;
                }
            }
        }
        Graph { offsets, neighbors }
    }

    /// Iterator over undirected edges (u < v).
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.vertex_count() as Vertex).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Parses the edge-list text format: first line `n m`, then m lines `u v`.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<(Graph, DroppedEdges)> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))??;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header: expected \"n m\"".into()))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header: expected \"n m\"".into()))?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let mut it = trimmed.split_whitespace();
            let u: u64 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line: {trimmed:?}")))?;
            let v: u64 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line: {trimmed:?}")))?;
            if u >= n as u64 {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n as u64 {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            edges.push((u as Vertex, v as Vertex));
        }
        if edges.len() != m {
            return Err(Error::Parse(format!(
                "header promised {m} edges, found {}",
                edges.len()
            )));
        }
        Graph::from_edge_list(&edges, n)
    }

    /// Writes the edge-list text format; round-trips through `read_edge_list`.
    pub fn write_edge_list<W: Write>(&self, mut writer: W) -> Result<()> {
        writeln!(writer, "{} {}", self.vertex_count(), self.edge_count())?;
        for (u, v) in self.edges() {
            writeln!(writer, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Per-run cache of degree-filtered views. The same thresholds are reused
/// across all sources at a level, and any threshold at or above the maximum
/// edge degree is the graph itself.
pub struct FilterCache {
    base: std::sync::Arc<Graph>,
    max_edge_degree: u32,
    cache: std::collections::BTreeMap<u32, std::sync::Arc<Graph>>,
}

impl FilterCache {
    pub fn new(base: std::sync::Arc<Graph>) -> Self {
        let max_edge_degree = base.max_edge_degree();
        FilterCache {
            base,
            max_edge_degree,
            cache: Default::default(),
        }
    }

    pub fn get(&mut self, tau: u32) -> std::sync::Arc<Graph> {
        let key = tau.min(self.max_edge_degree);
        if key >= self.max_edge_degree {
            return self.base.clone();
        }
        self.cache
            .entry(key)
            .or_insert_with(|| std::sync::Arc::new(self.base.degree_filtered_view(key)))
            .clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn path_graph(n: usize) -> Graph {
        let edges: Vec<_> = (0..n as Vertex - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edge_list(&edges, n).unwrap().0
    }

    #[test]
    fn path_construction() {
        let (g, dropped) = Graph::from_edge_list(&[(0, 1), (1, 2)], 3).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(
            (0..3).map(|v| g.degree(v)).collect::<Vec<_>>(),
            vec![1, 2, 1]
        );
        assert_eq!(dropped, DroppedEdges::default());
    }

    #[test]
    fn dedup_and_self_loop() {
        let (g, dropped) = Graph::from_edge_list(&[(0, 1), (1, 0), (2, 2)], 3).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(dropped.duplicates, 1);
        assert_eq!(dropped.self_loops, 1);
    }

    #[test]
    fn out_of_range_is_an_error() {
        assert!(Graph::from_edge_list(&[(0, 3)], 3).is_err());
    }

    #[test]
    fn edge_degree_examples() {
        let p3 = path_graph(3);
        assert_eq!(p3.edge_degree(0, 1).unwrap(), 1);

        // star K_{1,4}
        let (star, _) = Graph::from_edge_list(&[(0, 1), (0, 2), (0, 3), (0, 4)], 5).unwrap();
        assert_eq!(star.edge_degree(0, 1).unwrap(), 1);

        let p5 = path_graph(5);
        assert_eq!(p5.edge_degree(1, 2).unwrap(), 2);
        assert!(p5.edge_degree(0, 4).is_err());
    }

    #[test]
    fn filtered_view_examples() {
        let p5 = path_graph(5);
        let leaves_only = p5.degree_filtered_view(1);
        assert_eq!(leaves_only.edge_count(), 2);
        assert!(leaves_only.has_edge(0, 1));
        assert!(leaves_only.has_edge(3, 4));
        assert!(!leaves_only.has_edge(1, 2));

        let all = p5.degree_filtered_view(2);
        assert_eq!(all.edge_count(), p5.edge_count());
    }

    #[test]
    fn edge_list_round_trip() {
        let (g, _) = Graph::from_edge_list(&[(0, 1), (1, 2), (0, 2), (2, 3)], 4).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let (back, dropped) = Graph::read_edge_list(&buf[..]).unwrap();
        assert_eq!(dropped, DroppedEdges::default());
        assert_eq!(back.vertex_count(), g.vertex_count());
        let a: Vec<_> = g.edges().collect();
        let b: Vec<_> = back.edges().collect();
        assert_eq!(a, b);
    }
}
