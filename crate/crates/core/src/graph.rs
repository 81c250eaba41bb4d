//! Immutable simple graphs over a bit-row adjacency matrix.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::bitset::{VertexSet, MAX_VERTICES};

/// Environment variable overriding the configured vertex cap.
pub const MAX_N_ENV: &str = "GIRTHLAB_MAX_N";

const DEFAULT_VERTEX_CAP: usize = 64;

/// The configured maximum order for parsed and constructed graphs.
///
/// Defaults to 64; `GIRTHLAB_MAX_N` may raise it up to the build's hard limit
/// (256 with the `wide` feature).
pub fn vertex_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(MAX_N_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .map(|n| n.min(MAX_VERTICES))
            .unwrap_or(DEFAULT_VERTEX_CAP.min(MAX_VERTICES))
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph order {n} exceeds the configured maximum {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    Loop(usize),
    #[error("invalid named graph: {0}")]
    InvalidNamed(String),
}

/// An undirected simple graph on vertices `0..n`.
///
/// Rows are symmetric, loop-free bit vectors. Graphs are immutable once
/// built; use [`GraphBuilder`] to accumulate edges.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    m: usize,
    rows: Vec<VertexSet>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Accumulates edges, then freezes into a [`Graph`].
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    rows: Vec<VertexSet>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        let max = vertex_cap();
        if n > max {
            return Err(GraphError::TooManyVertices { n, max });
        }
        Ok(GraphBuilder {
            rows: vec![VertexSet::empty(); n],
        })
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<&mut Self, GraphError> {
        let n = self.rows.len();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { v: x, n });
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        self.rows[u].insert(v);
        self.rows[v].insert(u);
        Ok(self)
    }

    pub fn build(self) -> Graph {
        Graph::from_rows_unchecked(self.rows)
    }
}

impl Graph {
    /// The graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Result<Graph, GraphError> {
        Ok(GraphBuilder::new(n)?.build())
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut b = GraphBuilder::new(n)?;
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    /// Builds a graph from rows that the caller guarantees are symmetric and
    /// loop-free.
    pub(crate) fn from_rows_unchecked(rows: Vec<VertexSet>) -> Graph {
        debug_assert!(rows.iter().enumerate().all(|(i, r)| !r.contains(i)));
        debug_assert!(rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().all(|j| j < rows.len() && rows[j].contains(i))));
        let m = rows.iter().map(VertexSet::len).sum::<usize>() / 2;
        Graph {
            n: rows.len(),
            m,
            rows,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.rows[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    pub fn rows(&self) -> &[VertexSet] {
        &self.rows
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Edges `(i, j)` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.above(i).iter().map(move |j| (i, j)))
    }

    /// Common degree if the graph is regular. The empty graph on zero
    /// vertices is reported regular of degree 0.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = self.rows.first().map_or(0, VertexSet::len);
        self.rows.iter().all(|r| r.len() == k).then_some(k)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = VertexSet::singleton(0);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::empty();
            for v in frontier {
                next |= self.rows[v];
            }
            frontier = next - seen;
            seen |= frontier;
        }
        seen.len() == self.n
    }

    /// Breadth-first distances from `root`; `None` for unreachable vertices.
    pub fn distances_from(&self, root: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for w in self.rows[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Number of vertices at each distance from `root` (index = distance).
    pub fn distance_profile(&self, root: usize) -> Vec<usize> {
        let mut profile = Vec::new();
        for d in self.distances_from(root).into_iter().flatten() {
            if profile.len() <= d {
                profile.resize(d + 1, 0);
            }
            profile[d] += 1;
        }
        profile
    }

    /// Number of edges with both endpoints in `set`.
    pub fn edges_within(&self, set: VertexSet) -> usize {
        set.iter()
            .map(|v| (self.rows[v] & set).len())
            .sum::<usize>()
            / 2
    }

    /// Number of edges `{x, y}` with `x` in `a` and `y` in `b`.
    ///
    /// Each edge is counted once even when the sets overlap, so
    /// `edges_between(s, s) == edges_within(s)`.
    pub fn edges_between(&self, a: VertexSet, b: VertexSet) -> usize {
        let directed: usize = a.iter().map(|x| (self.rows[x] & b).len()).sum();
        directed - self.edges_within(a & b)
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut rows = vec![VertexSet::empty(); self.n];
        for (u, v) in self.edges() {
            rows[perm[u]].insert(perm[v]);
            rows[perm[v]].insert(perm[u]);
        }
        Graph::from_rows_unchecked(rows)
    }

    /// Degree sequence, regularity and connectivity in one pass.
    pub fn basic_queries(&self) -> BasicQueries {
        let mut degree_sequence: Vec<usize> = self.rows.iter().map(VertexSet::len).collect();
        degree_sequence.sort_unstable();
        BasicQueries {
            degree_sequence,
            regular_degree: self.regular_degree(),
            is_connected: self.is_connected(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasicQueries {
    pub degree_sequence: Vec<usize>,
    pub regular_degree: Option<usize>,
    pub is_connected: bool,
}

impl BasicQueries {
    pub fn is_regular(&self) -> bool {
        self.regular_degree.is_some()
    }
}

/// The standard test graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedGraphId {
    Cycle(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    Petersen,
    Dodecahedron,
    Heawood,
    /// Path on the given number of vertices.
    Path(usize),
}

impl fmt::Display for NamedGraphId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedGraphId::Cycle(n) => write!(f, "cycle({n})"),
            NamedGraphId::Complete(n) => write!(f, "complete({n})"),
            NamedGraphId::CompleteBipartite(a, b) => write!(f, "complete_bipartite({a},{b})"),
            NamedGraphId::Petersen => f.write_str("petersen"),
            NamedGraphId::Dodecahedron => f.write_str("dodecahedron"),
            NamedGraphId::Heawood => f.write_str("heawood"),
            NamedGraphId::Path(n) => write!(f, "path({n})"),
        }
    }
}

impl FromStr for NamedGraphId {
    type Err = GraphError;

    /// Accepts `petersen`, `dodecahedron`, `heawood`, `cycle(5)`,
    /// `complete(4)`, `complete_bipartite(3,3)` and `path(4)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::InvalidNamed(s.to_string());
        let s_trim = s.trim().to_ascii_lowercase();
        let (name, args) = match s_trim.find('(') {
            Some(open) => {
                let close = s_trim.strip_suffix(')').ok_or_else(bad)?;
                let args = close[open + 1..]
                    .split(',')
                    .map(|a| a.trim().parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?;
                (&s_trim[..open], args)
            }
            None => (s_trim.as_str(), Vec::new()),
        };
        let id = match (name, args.as_slice()) {
            ("petersen", []) => NamedGraphId::Petersen,
            ("dodecahedron", []) => NamedGraphId::Dodecahedron,
            ("heawood", []) => NamedGraphId::Heawood,
            ("cycle", [n]) => NamedGraphId::Cycle(*n),
            ("complete", [n]) => NamedGraphId::Complete(*n),
            ("complete_bipartite", [a, b]) => NamedGraphId::CompleteBipartite(*a, *b),
            ("path", [n]) => NamedGraphId::Path(*n),
            _ => return Err(bad()),
        };
        Ok(id)
    }
}

/// Constructs one of the standard graphs.
pub fn named_graph(id: NamedGraphId) -> Result<Graph, GraphError> {
    let invalid = || GraphError::InvalidNamed(id.to_string());
    match id {
        NamedGraphId::Cycle(n) => {
            if n < 3 {
                return Err(invalid());
            }
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            Graph::from_edges(n, &edges)
        }
        NamedGraphId::Complete(n) => {
            let edges: Vec<_> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            Graph::from_edges(n, &edges)
        }
        NamedGraphId::CompleteBipartite(a, b) => {
            if a == 0 || b == 0 {
                return Err(invalid());
            }
            let edges: Vec<_> = (0..a)
                .flat_map(|i| (0..b).map(move |j| (i, a + j)))
                .collect();
            Graph::from_edges(a + b, &edges)
        }
        NamedGraphId::Path(n) => {
            if n == 0 {
                return Err(invalid());
            }
            let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            Graph::from_edges(n, &edges)
        }
        NamedGraphId::Petersen => {
            // Kneser graph K(5,2): 2-subsets of {0..4}, adjacent when disjoint.
            let pairs: Vec<(usize, usize)> = (0..5)
                .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
                .collect();
            let mut edges = Vec::new();
            for (i, p) in pairs.iter().enumerate() {
                for (j, q) in pairs.iter().enumerate().skip(i + 1) {
                    if p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1 {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(10, &edges)
        }
        NamedGraphId::Dodecahedron => {
            // Generalized Petersen graph GP(10, 2).
            let mut edges = Vec::new();
            for i in 0..10 {
                edges.push((i, (i + 1) % 10));
                edges.push((i, 10 + i));
                edges.push((10 + i, 10 + (i + 2) % 10));
            }
            Graph::from_edges(20, &edges)
        }
        NamedGraphId::Heawood => {
            // Points 0..7, lines 7..14; line i is {i, i+1, i+3} mod 7.
            let mut edges = Vec::new();
            for line in 0..7 {
                for off in [0, 1, 3] {
                    edges.push(((line + off) % 7, 7 + line));
                }
            }
            Graph::from_edges(14, &edges)
        }
    }
}
