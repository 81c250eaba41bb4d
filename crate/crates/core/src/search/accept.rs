//! Canonical acceptance: a leaf is kept only if it is exactly the labelled
//! graph the generator builds when replayed on the canonical form.

use crate::bitset::VertexSet;
use crate::canon::{canonical_form_coloured, leading_cell};
use crate::graph::Graph;

use super::state::Params;

/// Colour classes ordered so the vertices on the most girth cycles come
/// first; canonical vertex 0 is then a legal root.
pub(crate) fn colours(counts: &[u64]) -> Vec<u64> {
    counts.iter().map(|&c| u64::MAX - c).collect()
}

/// Canonical form of a leaf, or `None` when the leaf is not the chosen
/// representative of its class.
pub(crate) fn accept(p: &Params, leaf: &Graph, counts: &[u64]) -> Option<Graph> {
    let col = colours(counts);
    if !leading_cell(leaf, &col).contains(0) {
        return None;
    }
    let canon = canonical_form_coloured(leaf, &col).graph;
    (replay(p, &canon) == leaf.rows()).then_some(canon)
}

/// Canonical form under the search colouring, with no acceptance test.
pub(crate) fn canonical(leaf: &Graph, counts: &[u64]) -> Graph {
    canonical_form_coloured(leaf, &colours(counts)).graph
}

/// Replays the generator on `c`, resolving every free choice by canonical
/// index, and returns the adjacency rows in generator labels.
pub(crate) fn replay(p: &Params, c: &Graph) -> Vec<VertexSet> {
    let n = c.n();
    let r = (p.g - 1) / 2;
    let mut phi: Vec<usize> = vec![0];
    let mut psi = vec![usize::MAX; n];
    psi[0] = 0;
    let mut rows = vec![VertexSet::empty(); n];
    let mut deg = vec![0usize; n];
    let mut level = vec![0usize];

    let mut i = 0;
    while i < phi.len() {
        if level[i] < r {
            for y in c.neighbors(phi[i]) {
                if psi[y] == usize::MAX {
                    let l = phi.len();
                    psi[y] = l;
                    phi.push(y);
                    level.push(level[i] + 1);
                    rows[i].insert(l);
                    rows[l].insert(i);
                    deg[i] += 1;
                    deg[l] += 1;
                }
            }
        }
        i += 1;
    }

    let swap = |phi: &mut Vec<usize>, psi: &mut Vec<usize>, a: usize, b: usize| {
        phi.swap(a, b);
        psi[phi[a]] = a;
        psi[phi[b]] = b;
    };

    while let Some(v) = (0..phi.len()).find(|&v| deg[v] < p.k) {
        let len = phi.len();
        // The vertex processed as `v` is the smallest canonical index
        // among its twins.
        let mut best = v;
        for l in v + 1..len {
            if rows[l] == rows[v] && phi[l] < phi[best] {
                best = l;
            }
        }
        if best != v {
            swap(&mut phi, &mut psi, v, best);
        }
        // Within each twin class, neighbours of v take the smallest labels.
        let nv = c.neighbors(phi[v]);
        let mut done = vec![false; len];
        for a in v + 1..len {
            if done[a] {
                continue;
            }
            let class: Vec<usize> = (a..len).filter(|&l| rows[l] == rows[a]).collect();
            for &l in &class {
                done[l] = true;
            }
            if class.len() < 2 {
                continue;
            }
            let mut members: Vec<usize> = class.iter().map(|&l| phi[l]).collect();
            members.sort_by_key(|&x| (!nv.contains(x), x));
            for (&l, &x) in class.iter().zip(&members) {
                phi[l] = x;
                psi[x] = l;
            }
        }
        let mut targets: Vec<usize> = (v + 1..len)
            .filter(|&t| nv.contains(phi[t]) && !rows[v].contains(t))
            .collect();
        for y in nv {
            if psi[y] == usize::MAX {
                let l = phi.len();
                psi[y] = l;
                phi.push(y);
                targets.push(l);
            }
        }
        for t in targets {
            rows[v].insert(t);
            rows[t].insert(v);
            deg[v] += 1;
            deg[t] += 1;
        }
    }
    rows
}
