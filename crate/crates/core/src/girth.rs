//! Girth, girth-cycle counts, shells and signatures.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::Graph;

/// Length of a shortest cycle, or `Acyclic` for forests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Girth {
    Finite(usize),
    Acyclic,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Acyclic => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Acyclic => f.write_str("acyclic"),
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Girth::Finite(g) => s.serialize_u64(*g as u64),
            Girth::Acyclic => s.serialize_str("acyclic"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GirthError {
    #[error("graph is acyclic; girth cycles are undefined")]
    Acyclic,
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("the girth-5 counter needs a regular graph of girth 5 (found girth {0})")]
    FastPathNotApplicable(Girth),
}

/// Shortest cycle length via a breadth-first search from every root.
///
/// A non-tree edge `vw` met while scanning from root `r` closes a closed walk
/// of length `d(v) + d(w) + 1` through `r`; the minimum over all roots is
/// attained on a shortest cycle.
pub fn girth(g: &Graph) -> Girth {
    let n = g.n();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = Vec::with_capacity(n);
    for root in 0..n {
        dist.fill(usize::MAX);
        queue.clear();
        dist[root] = 0;
        parent[root] = usize::MAX;
        queue.push(root);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            // Any closed walk found from here on has length at least 2 d(v).
            if 2 * dist[v] >= best {
                break;
            }
            for w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    parent[w] = v;
                    queue.push(w);
                } else if parent[v] != w {
                    best = best.min(dist[v] + dist[w] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Acyclic
    } else {
        Girth::Finite(best)
    }
}

/// Breadth-first shells around a root: `N(u)`, `N₂(u)`, and everything else.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShellDecomposition {
    pub root: usize,
    pub n1: VertexSet,
    pub n2: VertexSet,
    /// Vertices at distance three or more, including unreachable ones.
    pub n3plus: VertexSet,
}

impl ShellDecomposition {
    /// `N(u) ∪ N₂(u)`.
    pub fn inner(&self) -> VertexSet {
        self.n1 | self.n2
    }

    /// Vertices at distance exactly three.
    pub fn n3(&self, g: &Graph) -> VertexSet {
        let mut out = VertexSet::empty();
        for w in self.n2 {
            out |= g.neighbors(w);
        }
        out & self.n3plus
    }
}

pub fn shell_decompose(g: &Graph, u: usize) -> ShellDecomposition {
    assert!(u < g.n(), "root {u} out of range");
    let root = VertexSet::singleton(u);
    let n1 = g.neighbors(u);
    let mut reach = VertexSet::empty();
    for w in n1 {
        reach |= g.neighbors(w);
    }
    let n2 = reach - n1 - root;
    let n3plus = g.vertices() - n1 - n2 - root;
    let shells = ShellDecomposition {
        root: u,
        n1,
        n2,
        n3plus,
    };
    // Locally Moore-like: k-regular, no triangle at u, and every second-shell
    // vertex hangs off exactly one first-shell vertex.
    if cfg!(debug_assertions) {
        if let Some(k) = g.regular_degree() {
            let treelike =
                g.edges_within(n1) == 0 && n2.iter().all(|w| (g.neighbors(w) & n1).len() == 1);
            if treelike {
                debug_assert_eq!(n2.len(), k * (k - 1));
            }
        }
    }
    shells
}

/// Per-vertex and per-edge counts of cycles whose length equals the girth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GirthProfile {
    pub girth: usize,
    pub total_girth_cycles: u64,
    pub per_vertex: Vec<u64>,
    #[serde(serialize_with = "serialize_edge_map")]
    pub per_edge: BTreeMap<(usize, usize), u64>,
}

fn serialize_edge_map<S: Serializer>(
    map: &BTreeMap<(usize, usize), u64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_seq(map.iter().map(|(&(i, j), &c)| [i as u64, j as u64, c]))
}

impl GirthProfile {
    pub fn edge_count(&self, u: usize, v: usize) -> Option<u64> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.per_edge.get(&key).copied()
    }

    /// Checks the three handshake identities; returns a description of the
    /// first violation.
    pub fn check_handshakes(&self, g: &Graph) -> Result<(), String> {
        let expected = self.girth as u64 * self.total_girth_cycles;
        let vsum: u64 = self.per_vertex.iter().sum();
        if vsum != expected {
            return Err(format!("sum of vertex counts {vsum} != g*C = {expected}"));
        }
        let esum: u64 = self.per_edge.values().sum();
        if esum != expected {
            return Err(format!("sum of edge counts {esum} != g*C = {expected}"));
        }
        for v in 0..g.n() {
            let s: u64 = g
                .neighbors(v)
                .iter()
                .map(|w| self.edge_count(v, w).unwrap_or(0))
                .sum();
            if s != 2 * self.per_vertex[v] {
                return Err(format!(
                    "vertex {v}: incident edge counts sum to {s}, expected {}",
                    2 * self.per_vertex[v]
                ));
            }
        }
        Ok(())
    }
}

/// Which counter produced a profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleEngine {
    /// Anchored depth-first path enumeration; works for any girth.
    PathEnumeration,
    /// Edges inside `N₂(v)`; regular graphs of girth 5 only.
    Girth5Fast,
}

/// Girth profile using the fastest applicable engine.
pub fn girth_profile(g: &Graph) -> Result<GirthProfile, GirthError> {
    let gi = girth(g);
    match gi {
        Girth::Acyclic => Err(GirthError::Acyclic),
        Girth::Finite(5) if g.regular_degree().is_some() => Ok(fast_girth5(g)),
        Girth::Finite(len) => Ok(enumerate_cycles(g, len)),
    }
}

pub fn girth_profile_with(g: &Graph, engine: CycleEngine) -> Result<GirthProfile, GirthError> {
    let gi = girth(g);
    let len = gi.finite().ok_or(GirthError::Acyclic)?;
    match engine {
        CycleEngine::PathEnumeration => Ok(enumerate_cycles(g, len)),
        CycleEngine::Girth5Fast => {
            if len != 5 || g.regular_degree().is_none() {
                return Err(GirthError::FastPathNotApplicable(gi));
            }
            Ok(fast_girth5(g))
        }
    }
}

fn empty_edge_map(g: &Graph) -> BTreeMap<(usize, usize), u64> {
    g.edges().map(|e| (e, 0)).collect()
}

/// Counts cycles of length exactly `len`. Each cycle is enumerated once, as
/// the path starting at its minimal vertex whose second vertex is the
/// smaller of the two cycle-neighbours of that minimal vertex.
fn enumerate_cycles(g: &Graph, len: usize) -> GirthProfile {
    let n = g.n();
    let mut per_vertex = vec![0u64; n];
    let mut per_edge_dense = vec![0u64; n * n];
    let mut total = 0u64;
    let mut path = Vec::with_capacity(len);
    for s in 0..n {
        let allowed = g.vertices().above(s);
        // Distances from s inside the allowed region bound how far the path
        // may stray and still return in time.
        let dist = restricted_distances(g, s, allowed);
        path.clear();
        path.push(s);
        extend_path(
            g,
            len,
            allowed,
            &dist,
            &mut path,
            VertexSet::singleton(s),
            &mut |p: &[usize]| {
                total += 1;
                for (i, &v) in p.iter().enumerate() {
                    per_vertex[v] += 1;
                    let w = p[(i + 1) % p.len()];
                    let (a, b) = if v < w { (v, w) } else { (w, v) };
                    per_edge_dense[a * n + b] += 1;
                }
            },
        );
    }
    let mut per_edge = empty_edge_map(g);
    for ((a, b), c) in per_edge.iter_mut() {
        *c = per_edge_dense[*a * n + *b];
    }
    GirthProfile {
        girth: len,
        total_girth_cycles: total,
        per_vertex,
        per_edge,
    }
}

fn restricted_distances(g: &Graph, s: usize, allowed: VertexSet) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[s] = 0;
    let mut seen = VertexSet::singleton(s);
    let mut frontier = seen;
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = VertexSet::empty();
        for v in frontier {
            next |= g.neighbors(v);
        }
        frontier = (next & allowed) - seen;
        seen |= frontier;
        for v in frontier {
            dist[v] = d;
        }
    }
    dist
}

fn extend_path<F: FnMut(&[usize])>(
    g: &Graph,
    len: usize,
    allowed: VertexSet,
    dist: &[usize],
    path: &mut Vec<usize>,
    used: VertexSet,
    found: &mut F,
) {
    let s = path[0];
    let last = *path.last().unwrap();
    if path.len() == len {
        if g.has_edge(last, s) && path[1] < last {
            found(path);
        }
        return;
    }
    let remaining = len - path.len();
    for w in (g.neighbors(last) & allowed) - used {
        // w needs to get back to s in `remaining` steps.
        if dist[w] > remaining {
            continue;
        }
        path.push(w);
        let mut u2 = used;
        u2.insert(w);
        extend_path(g, len, allowed, dist, path, u2, found);
        path.pop();
    }
}

/// For graphs of girth 5, `λ_v` is the number of edges inside `N₂(v)`, and
/// the 5-cycles through edge `uv` are the paths `v a b c u` with
/// `a ∈ N(v)∖u`, `c ∈ N(u)∖v`, `b ∈ N(a) ∩ N(c)`.
fn fast_girth5(g: &Graph) -> GirthProfile {
    let n = g.n();
    let per_vertex: Vec<u64> = (0..n)
        .map(|v| g.edges_within(shell_decompose(g, v).n2) as u64)
        .collect();
    let mut per_edge = empty_edge_map(g);
    for (&(u, v), count) in per_edge.iter_mut() {
        let mut c = 0u64;
        for a in g.neighbors(v) - VertexSet::singleton(u) {
            for x in g.neighbors(u) - VertexSet::singleton(v) {
                c += (g.neighbors(a) & g.neighbors(x)).len() as u64;
            }
        }
        *count = c;
    }
    let total = per_vertex.iter().sum::<u64>() / 5;
    GirthProfile {
        girth: 5,
        total_girth_cycles: total,
        per_vertex,
        per_edge,
    }
}

/// Sorted girth-cycle counts of the edges at a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Signature(pub Vec<u64>);

impl Signature {
    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

pub fn signature(g: &Graph, v: usize, profile: &GirthProfile) -> Result<Signature, GirthError> {
    if v >= g.n() {
        return Err(GirthError::VertexOutOfRange { v, n: g.n() });
    }
    let mut sig: Vec<u64> = g
        .neighbors(v)
        .iter()
        .map(|w| profile.edge_count(v, w).unwrap_or(0))
        .collect();
    sig.sort_unstable();
    Ok(Signature(sig))
}
