//! Partial graphs grown from a breadth-first tree, one edge at a time.
//!
//! Labels `0..tree_size` form the depth-`r` tree around root 0, assigned
//! level by level. Completion repeatedly takes the smallest deficient vertex
//! `v` and joins it, in increasing order, to an existing deficient vertex far
//! enough away or to the next unused label.

use crate::bitset::VertexSet;
use crate::girth::{girth_profile_with, CycleEngine};
use crate::graph::Graph;

#[derive(Clone, Debug)]
pub(crate) struct Params {
    pub k: usize,
    pub g: usize,
    pub n_max: usize,
    pub tree_size: usize,
    /// Prune as soon as any vertex lies on more than this many girth cycles.
    pub count_cap: Option<u64>,
    /// Required count at the root once it is final.
    pub root_target: Option<u64>,
}

impl Params {
    pub fn new(k: usize, g: usize, n_max: usize) -> Params {
        let r = (g - 1) / 2;
        let mut size = 1;
        let mut level = 1;
        for i in 0..r {
            level = if i == 0 { k } else { level * (k - 1) };
            size += level;
        }
        Params {
            k,
            g,
            n_max,
            tree_size: size,
            count_cap: None,
            root_target: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct State {
    pub n: usize,
    pub rows: Vec<VertexSet>,
    pub deg: Vec<usize>,
    /// Girth-length cycles through each vertex in the partial graph.
    pub counts: Vec<u64>,
    /// Completion edges added after the tree.
    pub depth: usize,
}

pub(crate) enum Step {
    Leaf,
    Children(Vec<State>),
}

impl State {
    pub fn tree(p: &Params) -> State {
        let mut s = State {
            n: 1,
            rows: vec![VertexSet::empty(); p.n_max.max(p.tree_size)],
            deg: vec![0; p.n_max.max(p.tree_size)],
            counts: vec![0; p.n_max.max(p.tree_size)],
            depth: 0,
        };
        let r = (p.g - 1) / 2;
        let mut frontier = vec![0usize];
        for level in 0..r {
            let mut next = Vec::new();
            for &x in &frontier {
                let kids = if level == 0 { p.k } else { p.k - 1 };
                for _ in 0..kids {
                    let y = s.n;
                    s.n += 1;
                    s.link(x, y);
                    next.push(y);
                }
            }
            frontier = next;
        }
        debug_assert_eq!(s.n, p.tree_size);
        s
    }

    /// Rebuilds a state from a stored partial graph.
    pub fn from_graph(p: &Params, g: &Graph, depth: usize) -> Result<State, String> {
        if g.n() > p.n_max || g.n() < p.tree_size {
            return Err(format!("partial graph has {} vertices", g.n()));
        }
        let tree = State::tree(p);
        for v in 0..p.tree_size {
            if !tree.rows[v].is_subset(&g.neighbors(v)) {
                return Err("partial graph does not contain the search tree".into());
            }
        }
        let mut s = State {
            n: g.n(),
            rows: vec![VertexSet::empty(); p.n_max],
            deg: vec![0; p.n_max],
            counts: vec![0; p.n_max],
            depth,
        };
        for v in 0..g.n() {
            s.rows[v] = g.neighbors(v);
            s.deg[v] = g.degree(v);
            if s.deg[v] > p.k || s.deg[v] == 0 {
                return Err(format!("vertex {v} has degree {}", s.deg[v]));
            }
        }
        if let Ok(profile) = girth_profile_with(g, CycleEngine::PathEnumeration) {
            if profile.girth < p.g {
                return Err(format!("partial graph has girth {}", profile.girth));
            }
            if profile.girth == p.g {
                s.counts[..g.n()].copy_from_slice(&profile.per_vertex);
            }
        }
        Ok(s)
    }

    pub fn graph(&self) -> Graph {
        Graph::from_rows_unchecked(self.rows[..self.n].to_vec())
    }

    fn link(&mut self, a: usize, b: usize) {
        self.rows[a].insert(b);
        self.rows[b].insert(a);
        self.deg[a] += 1;
        self.deg[b] += 1;
    }

    pub fn smallest_deficient(&self, k: usize) -> Option<usize> {
        (0..self.n).find(|&v| self.deg[v] < k)
    }

    fn deficient(&self, k: usize) -> VertexSet {
        (0..self.n).filter(|&v| self.deg[v] < k).collect()
    }

    /// Vertices within distance `radius` of `v`.
    pub fn ball(&self, v: usize, radius: usize) -> VertexSet {
        let mut seen = VertexSet::singleton(v);
        let mut layer = seen;
        for _ in 0..radius {
            let mut next = VertexSet::empty();
            for x in layer {
                next |= self.rows[x];
            }
            layer = next - seen;
            if layer.is_empty() {
                break;
            }
            seen |= layer;
        }
        seen
    }

    /// Breadth-first layers from `src` to depth `depth`, with the number of
    /// shortest paths to each reached vertex.
    fn path_counts(&self, src: usize, depth: usize, ways: &mut [u64]) -> Vec<VertexSet> {
        let mut layers = vec![VertexSet::singleton(src)];
        let mut seen = layers[0];
        ways[src] = 1;
        for _ in 0..depth {
            let prev = *layers.last().unwrap();
            let mut next = VertexSet::empty();
            for x in prev {
                next |= self.rows[x];
            }
            next -= seen;
            for y in next {
                ways[y] = (self.rows[y] & prev).iter().map(|x| ways[x]).sum();
            }
            seen |= next;
            layers.push(next);
        }
        layers
    }

    /// Adds edge `a-b` (with `b` possibly the next fresh label) and credits
    /// every girth cycle it closes to the vertices on it. Requires
    /// `dist(a, b) >= g - 1`.
    fn add_edge(&mut self, p: &Params, a: usize, b: usize) {
        if b == self.n {
            self.n += 1;
            self.link(a, b);
            return;
        }
        let len = p.g - 1;
        let mut wa = vec![0u64; self.n];
        let mut wb = vec![0u64; self.n];
        let la = self.path_counts(a, len, &mut wa);
        if la[len].contains(b) {
            let lb = self.path_counts(b, len, &mut wb);
            for (i, layer) in la.iter().enumerate() {
                for x in *layer & lb[len - i] {
                    self.counts[x] += wa[x] * wb[x];
                }
            }
        }
        self.link(a, b);
    }

    fn violates_caps(&self, p: &Params) -> bool {
        if let Some(cap) = p.count_cap {
            if self.counts[..self.n].iter().any(|&c| c > cap) {
                return true;
            }
        }
        // Once every depth-r tree vertex is full the root count is final,
        // and the root must carry the largest count.
        let root_final = self
            .smallest_deficient(p.k)
            .map_or(true, |v| v >= p.tree_size);
        if root_final {
            let root = self.counts[0];
            if let Some(t) = p.root_target {
                if root != t {
                    return true;
                }
            }
            if self.counts[..self.n].iter().any(|&c| c > root) {
                return true;
            }
        }
        false
    }

    /// Every deficient vertex must still have enough admissible partners
    /// once no fresh labels remain.
    fn stuck(&self, p: &Params) -> bool {
        if self.n < p.n_max {
            return false;
        }
        let def = self.deficient(p.k);
        let stubs: usize = def.iter().map(|v| p.k - self.deg[v]).sum();
        if stubs % 2 == 1 {
            return true;
        }
        def.iter().any(|u| {
            let partners = def - self.ball(u, p.g - 2);
            partners.len() < p.k - self.deg[u]
        })
    }

    /// Expands one node of the generation tree.
    pub fn step(&self, p: &Params) -> Step {
        let Some(v) = self.smallest_deficient(p.k) else {
            return Step::Leaf;
        };
        let last = self.rows[v].last().filter(|&x| x > v).unwrap_or(v);
        let far = !self.ball(v, p.g - 2);
        let cands = self.deficient(p.k).above(last) & far;
        let mut seen_rows: Vec<VertexSet> = Vec::new();
        let mut out = Vec::new();
        for t in cands {
            // Twins with identical rows give isomorphic subtrees.
            if seen_rows.contains(&self.rows[t]) {
                continue;
            }
            seen_rows.push(self.rows[t]);
            self.push_child(p, v, t, &mut out);
        }
        if self.n < p.n_max {
            self.push_child(p, v, self.n, &mut out);
        }
        Step::Children(out)
    }

    fn push_child(&self, p: &Params, v: usize, t: usize, out: &mut Vec<State>) {
        let mut c = self.clone();
        c.add_edge(p, v, t);
        c.depth += 1;
        if !c.violates_caps(p) && !c.stuck(p) {
            out.push(c);
        }
    }
}
