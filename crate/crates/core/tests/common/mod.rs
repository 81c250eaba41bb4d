//! Independent reference implementations used as test oracles. Nothing
//! here calls into the library beyond `Graph` construction and accessors.

#![allow(dead_code)]

pub mod displays;

use std::collections::{BTreeMap, BTreeSet};

use girthlab::canon::canonical_form;
use girthlab::Graph;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn edge_list(g: &Graph) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            if g.has_edge(a, b) {
                e.push((a, b));
            }
        }
    }
    e
}

/// Girth cycles by brute force: every closed walk `s, x1, ..., x_{len-1}`
/// with all `x_i > s` and distinct, halved for direction.
pub struct NaiveCycles {
    pub len: usize,
    pub total: u64,
    pub per_vertex: Vec<u64>,
    pub per_edge: BTreeMap<(usize, usize), u64>,
}

pub fn naive_shortest_cycle(g: &Graph) -> Option<usize> {
    (3..=g.n()).find(|&len| naive_cycles_of_length(g, len).total > 0)
}

pub fn naive_cycles_of_length(g: &Graph, len: usize) -> NaiveCycles {
    let n = g.n();
    let mut per_vertex = vec![0u64; n];
    let mut per_edge: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut total = 0u64;
    let mut path = Vec::with_capacity(len);
    for s in 0..n {
        path.clear();
        path.push(s);
        walk(g, s, len, &mut path, &mut |p| {
            total += 1;
            for i in 0..p.len() {
                per_vertex[p[i]] += 1;
                let (a, b) = (p[i], p[(i + 1) % p.len()]);
                *per_edge.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        });
    }
    // Each cycle was found once per direction.
    for c in per_vertex.iter_mut() {
        *c /= 2;
    }
    for c in per_edge.values_mut() {
        *c /= 2;
    }
    NaiveCycles {
        len,
        total: total / 2,
        per_vertex,
        per_edge,
    }
}

fn walk(g: &Graph, s: usize, len: usize, path: &mut Vec<usize>, hit: &mut dyn FnMut(&[usize])) {
    let last = *path.last().unwrap();
    if path.len() == len {
        if g.has_edge(last, s) {
            hit(path);
        }
        return;
    }
    for x in 0..g.n() {
        if x > s && g.has_edge(last, x) && !path.contains(&x) {
            path.push(x);
            walk(g, s, len, path, hit);
            path.pop();
        }
    }
}

pub fn is_connected(g: &Graph) -> bool {
    let n = g.n();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for y in 0..n {
            if g.has_edge(x, y) && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// All-pairs distances by Floyd–Warshall; `usize::MAX` when unreachable.
pub fn distance_matrix(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for a in 0..n {
        d[a][a] = 0;
        for b in 0..n {
            if g.has_edge(a, b) {
                d[a][b] = 1;
            }
        }
    }
    for m in 0..n {
        for a in 0..n {
            for b in 0..n {
                if d[a][m] + d[m][b] < d[a][b] {
                    d[a][b] = d[a][m] + d[m][b];
                }
            }
        }
    }
    d
}

/// Every labelled simple `k`-regular graph on `n` vertices containing the
/// `fixed` edges. With a fixed neighbourhood (or breadth-first tree when the
/// girth allows) of vertex 0 no isomorphism class is lost. Each leaf is
/// produced once: the smallest vertex short of degree `k` is joined to
/// larger vertices in increasing order.
pub fn labelled_regular(
    n: usize,
    k: usize,
    fixed: &[(usize, usize)],
    out: &mut dyn FnMut(&[Vec<bool>]),
) {
    let mut adj = vec![vec![false; n]; n];
    let mut deg = vec![0usize; n];
    for &(a, b) in fixed {
        adj[a][b] = true;
        adj[b][a] = true;
        deg[a] += 1;
        deg[b] += 1;
    }
    fill(n, k, &mut adj, &mut deg, out);
}

fn fill(
    n: usize,
    k: usize,
    adj: &mut Vec<Vec<bool>>,
    deg: &mut Vec<usize>,
    out: &mut dyn FnMut(&[Vec<bool>]),
) {
    let Some(v) = (0..n).find(|&v| deg[v] < k) else {
        out(adj);
        return;
    };
    let start = (v + 1..n)
        .filter(|&w| adj[v][w])
        .max()
        .map_or(v + 1, |m| m + 1);
    for w in start..n {
        if deg[w] < k && !adj[v][w] {
            adj[v][w] = true;
            adj[w][v] = true;
            deg[v] += 1;
            deg[w] += 1;
            fill(n, k, adj, deg, out);
            adj[v][w] = false;
            adj[w][v] = false;
            deg[v] -= 1;
            deg[w] -= 1;
        }
    }
}

pub fn from_matrix(adj: &[Vec<bool>]) -> Graph {
    let n = adj.len();
    let mut e = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if adj[a][b] {
                e.push((a, b));
            }
        }
    }
    Graph::from_edges(n, &e).unwrap()
}

/// Isomorphism-class certificate: the least upper-triangle adjacency string
/// over every breadth-first labelling from every root and every order of
/// each vertex's newly discovered children. Connected graphs only.
pub fn bfs_certificate(g: &Graph) -> Vec<bool> {
    let n = g.n();
    let mut best: Option<Vec<bool>> = None;
    for root in 0..n {
        let mut order = vec![root];
        let mut pos = vec![usize::MAX; n];
        pos[root] = 0;
        bfs_orders(g, 0, &mut order, &mut pos, &mut |ord| {
            let mut cert = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..n {
                for j in i + 1..n {
                    cert.push(g.has_edge(ord[i], ord[j]));
                }
            }
            if best.as_ref().is_none_or(|b| cert < *b) {
                best = Some(cert);
            }
        });
    }
    best.unwrap_or_default()
}

fn bfs_orders(
    g: &Graph,
    head: usize,
    order: &mut Vec<usize>,
    pos: &mut Vec<usize>,
    done: &mut dyn FnMut(&[usize]),
) {
    if head == order.len() {
        if order.len() == g.n() {
            done(order);
        }
        return;
    }
    let x = order[head];
    let fresh: Vec<usize> = (0..g.n())
        .filter(|&y| g.has_edge(x, y) && pos[y] == usize::MAX)
        .collect();
    permute(&fresh, &mut |perm| {
        for &y in perm {
            pos[y] = order.len();
            order.push(y);
        }
        bfs_orders(g, head + 1, order, pos, done);
        for &y in perm {
            pos[y] = usize::MAX;
            order.pop();
        }
    });
}

fn permute(items: &[usize], f: &mut dyn FnMut(&[usize])) {
    let mut v = items.to_vec();
    heap(v.len(), &mut v, f);
}

fn heap(k: usize, v: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        f(v);
        return;
    }
    heap(k - 1, v, f);
    for i in 0..k - 1 {
        if k % 2 == 0 {
            v.swap(i, k - 1);
        } else {
            v.swap(0, k - 1);
        }
        heap(k - 1, v, f);
    }
}

/// Library canonical form as a plain key.
pub fn canon_key(g: &Graph) -> Vec<Vec<usize>> {
    let c = canonical_form(g).graph;
    (0..c.n())
        .map(|v| c.neighbors(v).iter().collect())
        .collect()
}

/// Class keys under both certificates, for connected graphs with
/// girth at least `min_girth`, from the naive labelled enumeration.
pub fn naive_classes(
    n: usize,
    k: usize,
    min_girth: usize,
    fixed: &[(usize, usize)],
) -> (BTreeSet<Vec<Vec<usize>>>, BTreeSet<Vec<bool>>) {
    let mut by_canon = BTreeSet::new();
    let mut by_bfs = BTreeSet::new();
    labelled_regular(n, k, fixed, &mut |adj| {
        let g = from_matrix(adj);
        if !is_connected(&g) {
            return;
        }
        if naive_girth_at_least(&g, min_girth) {
            let key = canon_key(&g);
            if by_canon.insert(key) {
                by_bfs.insert(bfs_certificate(&g));
            }
        }
    });
    (by_canon, by_bfs)
}

/// Shortest cycle length: from every root, a non-tree edge `x-y` closes a
/// cycle of length at most `d(x) + d(y) + 1`, with equality at some root.
pub fn naive_girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best: Option<usize> = None;
    for s in 0..n {
        let mut d = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        d[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for y in 0..n {
                if !g.has_edge(x, y) {
                    continue;
                }
                if d[y] == usize::MAX {
                    d[y] = d[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    let len = d[x] + d[y] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

pub fn naive_girth_at_least(g: &Graph, min_girth: usize) -> bool {
    naive_girth(g).is_none_or(|x| x >= min_girth)
}

/// Random simple `k`-regular graph on `n` vertices by the pairing model.
pub fn random_regular<R: Rng>(n: usize, k: usize, rng: &mut R) -> Graph {
    loop {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
        stubs.shuffle(rng);
        let mut edges = BTreeSet::new();
        let mut ok = true;
        for p in stubs.chunks(2) {
            let (a, b) = (p[0].min(p[1]), p[0].max(p[1]));
            if a == b || !edges.insert((a, b)) {
                ok = false;
                break;
            }
        }
        if ok {
            let e: Vec<(usize, usize)> = edges.into_iter().collect();
            return Graph::from_edges(n, &e).unwrap();
        }
    }
}
