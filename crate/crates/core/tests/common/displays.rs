//! Each counting display evaluated from scratch: distances from a
//! Floyd–Warshall matrix, sets as boolean masks, and edge counts by scanning
//! the edge list. Results are keyed by `(record name, branch index)`.

use std::collections::BTreeMap;

use girthlab::audit::InequalityRecord;
use girthlab::Graph;

use super::{distance_matrix, edge_list};

pub type Key = (String, Option<usize>);
pub type Values = BTreeMap<Key, (i64, i64)>;

type Mask = Vec<bool>;

struct Ctx {
    n: usize,
    k: i64,
    edges: Vec<(usize, usize)>,
    d: Vec<Vec<usize>>,
}

impl Ctx {
    fn new(g: &Graph) -> Ctx {
        Ctx {
            n: g.n(),
            k: g.degree(0) as i64,
            edges: edge_list(g),
            d: distance_matrix(g),
        }
    }

    fn shell(&self, u: usize, r: usize) -> Mask {
        (0..self.n).map(|x| self.d[u][x] == r).collect()
    }

    /// Edges with one end in `x` and the other in `y`.
    fn e(&self, x: &Mask, y: &Mask) -> i64 {
        self.edges
            .iter()
            .filter(|&&(a, b)| (x[a] && y[b]) || (x[b] && y[a]))
            .count() as i64
    }

    fn nbrs(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&x| self.d[v][x] == 1).collect()
    }

    fn mask(&self, items: &[usize]) -> Mask {
        let mut m = vec![false; self.n];
        for &i in items {
            m[i] = true;
        }
        m
    }
}

fn and(a: &Mask, b: &Mask) -> Mask {
    a.iter().zip(b).map(|(x, y)| *x && *y).collect()
}

fn minus(a: &Mask, b: &Mask) -> Mask {
    a.iter().zip(b).map(|(x, y)| *x && !*y).collect()
}

fn or(a: &Mask, b: &Mask) -> Mask {
    a.iter().zip(b).map(|(x, y)| *x || *y).collect()
}

fn size(a: &Mask) -> i64 {
    a.iter().filter(|&&x| x).count() as i64
}

fn put(out: &mut Values, name: &str, index: Option<usize>, lhs: i64, rhs: i64) {
    out.insert((name.to_string(), index), (lhs, rhs));
}

/// Case A displays for `v` outside `N(u) ∪ N₂(u)` with at least two
/// neighbours in `N₂(u)`, under the claimed `λ`.
pub fn case_a(g: &Graph, u: usize, v: usize, lambda: u64) -> Values {
    let c = Ctx::new(g);
    let k = c.k;
    let t = k * (k - 1) * (k - 1) - 2 * lambda as i64;
    let (n1u, n2u) = (c.shell(u, 1), c.shell(u, 2));
    let n2v = c.shell(v, 2);
    let nv = c.shell(v, 1);
    let va = and(&n2v, &n1u);
    let vb = and(&n2v, &n2u);
    let vc = minus(&minus(&n2v, &n1u), &n2u);
    let outside = minus(&nv, &n2u);
    let mut sum_da = 0;
    let mut sum_d_plus_a = 0;
    for ui in c.nbrs(u) {
        let branch = minus(&c.mask(&c.nbrs(ui)), &c.mask(&[u]));
        let d = c.e(&branch, &outside);
        let a = (0..c.n).any(|x| branch[x] && nv[x]) as i64;
        sum_da += d * a;
        sum_d_plus_a += d + a;
    }
    let y = c.e(&n2v, &n2v);
    let na = size(&va);
    let mut out = Values::new();
    put(
        &mut out,
        "VC_induced",
        None,
        (k - 1) * size(&vc),
        2 * c.e(&vc, &vc) + c.e(&vb, &vc),
    );
    put(
        &mut out,
        "VB_induced",
        None,
        (k - 1) * size(&vb),
        c.e(&va, &vb) + 2 * c.e(&vb, &vb) + c.e(&vb, &vc),
    );
    put(&mut out, "VAg", None, sum_d_plus_a, t);
    put(&mut out, "TwoEpsVA", None, sum_da, t - na);
    put(&mut out, "EAB", None, c.e(&va, &vb), sum_da + na * (na - 1));
    let base = k * (k - 1) * (k - 1);
    let rhs = if t > 0 && t <= k - 1 {
        base - t - 1
    } else {
        base + t + (2 - 2 * k).max(t * t - t * (k + 1))
    };
    put(&mut out, "Y_bound_caseA", None, 2 * y, rhs);
    out
}

/// Case B displays for `v ∈ N₃(u)` with one neighbour in `N₂(u)`.
pub fn case_b(g: &Graph, u: usize, v: usize, lambda: u64) -> Values {
    let c = Ctx::new(g);
    let k = c.k;
    let t = k * (k - 1) * (k - 1) - 2 * lambda as i64;
    let (n1u, n2u) = (c.shell(u, 1), c.shell(u, 2));
    let n2v = c.shell(v, 2);
    let nv = c.shell(v, 1);
    let vp = (0..c.n).find(|&x| nv[x] && n2u[x]).unwrap();
    let nvp = c.shell(vp, 1);
    let u1 = (0..c.n).find(|&x| nvp[x] && n1u[x]).unwrap();
    let nu1 = c.shell(u1, 1);
    let vs: Vec<usize> = c.nbrs(v).into_iter().filter(|&x| x != vp).collect();

    let va = and(&n2v, &n1u);
    let vb = and(&n2v, &n2u);
    let vc = minus(&minus(&n2v, &n1u), &n2u);
    let vb2 = minus(&vb, &nvp);
    let vc1 = and(&vc, &nvp);
    let vc2 = minus(&vc, &nvp);
    let covered = or(&or(&va, &vb), &vc);
    let v_out: Mask = covered.iter().map(|&x| !x).collect();
    let v_out_far = minus(&v_out, &nv);
    let y = c.e(&n2v, &n2v);

    let mut out = Values::new();
    put(
        &mut out,
        "VB_induced",
        None,
        (k - 1) * size(&vb),
        c.e(&va, &vb) + 2 * c.e(&vb, &vb) + c.e(&vb, &vc),
    );
    put(
        &mut out,
        "VC_induced_new",
        None,
        (k - 1) * size(&vc),
        2 * c.e(&vc, &vc) + c.e(&vb, &vc) + (k - 1) * (k - 1 - size(&vc1))
            - size(&vb2)
            - c.e(&vc2, &vb),
    );
    put(
        &mut out,
        "outer_bound1",
        None,
        size(&vb2) + size(&vc1) + 1 + c.e(&vb, &vc2),
        t,
    );
    put(
        &mut out,
        "outer_bound2",
        None,
        2 * (size(&and(&vb2, &nu1)) + size(&vc1) + 1),
        t,
    );
    put(
        &mut out,
        "EAB_new",
        None,
        c.e(&va, &vb),
        size(&and(&vb2, &nu1)),
    );
    let base = k * (k - 1) * (k - 1);
    if t > 0 && t <= k - 1 {
        put(&mut out, "Y_bound_caseB", None, 2 * y, base - t - 1);
    } else {
        let c1 = size(&vc1);
        put(
            &mut out,
            "Y_bound_caseB",
            None,
            4 * y,
            2 * base - 2 * (k - 1) * (k - c1) + 3 * t - 4 * c1 - 4,
        );
    }
    let mut sum_l = 0;
    for (i, &vi) in vs.iter().enumerate() {
        let li = and(&c.shell(vi, 1), &vc2);
        let rest = minus(&vc2, &li);
        let idx = Some(i + 1);
        put(&mut out, "LCprime", idx, c.e(&li, &vc1), size(&vc1));
        put(
            &mut out,
            "LCdoubleprime",
            idx,
            c.e(&li, &rest),
            size(&li) * (k - 2),
        );
        put(
            &mut out,
            "Li_expansion",
            idx,
            (k - 1) * size(&li),
            2 * c.e(&li, &li)
                + c.e(&li, &rest)
                + c.e(&li, &vc1)
                + c.e(&li, &vb)
                + c.e(&li, &v_out_far),
        );
        sum_l += size(&li) - size(&vc1);
    }
    put(
        &mut out,
        "Vout_bound",
        None,
        c.e(&vc2, &v_out_far) + c.e(&vc2, &vb),
        sum_l,
    );

    // Degree of u₁ in the branch multigraph.
    let branch = |x: usize| and(&c.shell(x, 1), &n2u);
    let b1 = branch(u1);
    let deg: i64 = c
        .nbrs(u)
        .into_iter()
        .filter(|&x| x != u1)
        .map(|x| c.e(&b1, &branch(x)))
        .sum();
    put(
        &mut out,
        "Gprime_degree",
        None,
        2 * deg,
        2 * (k - 1) * (k - 1) - t,
    );
    out
}

/// Number of `N₂(u)` neighbours of `v`, or `None` if `v` is not at
/// distance 3 from `u`.
pub fn n2_hits(g: &Graph, u: usize, v: usize) -> Option<usize> {
    let c = Ctx::new(g);
    if c.d[u][v] != 3 {
        return None;
    }
    Some(
        (0..c.n)
            .filter(|&x| c.d[v][x] == 1 && c.d[u][x] == 2)
            .count(),
    )
}

/// The library's records in the same shape.
pub fn library(records: &[InequalityRecord]) -> Values {
    records
        .iter()
        .map(|r| ((format!("{:?}", r.name), r.index), (r.lhs, r.rhs)))
        .collect()
}
