//! Executable audit of the girth-5 counting argument: every set, identity
//! and inequality is evaluated on a concrete graph with exact integers.
//!
//! `t` below is always `2ε = k(k-1)² - 2λ` for the claimed λ.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::format::write_graph6;
use crate::girth::{girth, girth_profile, Girth};
use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AuditError {
    #[error("graph is not regular")]
    NotRegular,
    #[error("degree {0} is below 3")]
    DegreeTooSmall(usize),
    #[error("girth is {0}, expected 5")]
    WrongGirth(Girth),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("not vertex-girth-regular: vertex {u} lies on {lambda_u} girth cycles, vertex {v} on {lambda_v}")]
    NotVgr {
        u: usize,
        v: usize,
        lambda_u: u64,
        lambda_v: u64,
    },
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("vertex {v} lies in N(u) ∪ N₂(u) for u={u}")]
    NotExterior { u: usize, v: usize },
    #[error("vertex {v} is at distance {dist} from u={u}, not 3")]
    NotInN3 { u: usize, v: usize, dist: usize },
    #[error("case mismatch: v={v} has {count} neighbours in N₂(u) for u={u}")]
    CaseMismatch { u: usize, v: usize, count: usize },
    #[error("main property fails at u={u}: {witness:?} (v′, v″, v)")]
    PropertyViolated {
        u: usize,
        witness: (usize, usize, usize),
    },
    #[error("neighbour index {index} out of range 1..={k}")]
    IndexOutOfRange { index: usize, k: usize },
}

/// Display labels of the argument, kept verbatim.
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RecordName {
    VC_induced,
    VB_induced,
    VAg,
    TwoEpsVA,
    EAB,
    Y_bound_caseA,
    VC_induced_new,
    outer_bound1,
    outer_bound2,
    EAB_new,
    Y_bound_caseB,
    LCprime,
    LCdoubleprime,
    Li_expansion,
    Vout_bound,
    Gprime_degree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

/// `Identity` records hold on every vertex-girth-regular girth-5 graph
/// with its true λ. `RangeConditional` records are only claimed when
/// `0 < 2ε ≤ k-1`, and their failures elsewhere are informational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    Identity,
    RangeConditional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityRecord {
    pub name: RecordName,
    /// Branch index `i` for the per-branch records.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub lhs: i64,
    pub relation: Relation,
    pub rhs: i64,
    pub holds: bool,
    pub kind: RecordKind,
}

impl InequalityRecord {
    fn new(name: RecordName, lhs: i64, relation: Relation, rhs: i64, kind: RecordKind) -> Self {
        InequalityRecord {
            name,
            index: None,
            lhs,
            relation,
            rhs,
            holds: relation.holds(lhs, rhs),
            kind,
        }
    }

    fn at(mut self, i: usize) -> Self {
        self.index = Some(i);
        self
    }
}

/// A named structural claim of the argument, asserted on the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralCheck {
    pub name: &'static str,
    pub holds: bool,
}

fn check(name: &'static str, holds: bool) -> StructuralCheck {
    StructuralCheck { name, holds }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OuterEdgeAudit {
    pub root: usize,
    pub two_eps_expected: i64,
    pub outer_edges_found: i64,
    pub pass: bool,
    /// `(k-1)|N₂(u)| = 2|E(N₂(u), N₂(u))| + outer edges`.
    pub derivation_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainPropertyAudit {
    pub root: usize,
    /// Triples `(v′, v″, v)` with `v′ < v″` in `N₂(u)` and `v` outside
    /// `N(u) ∪ N₂(u)` adjacent to both.
    pub violations: Vec<(usize, usize, usize)>,
}

impl MainPropertyAudit {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseAPartition {
    pub u: usize,
    pub v: usize,
    pub v_a: Vec<usize>,
    pub v_b: Vec<usize>,
    pub v_c: Vec<usize>,
    /// `N(u)` in ascending order: `u_1, ..., u_k`.
    pub neighbours_u: Vec<usize>,
    pub branches: Vec<Vec<usize>>,
    pub d: Vec<i64>,
    pub a: Vec<i64>,
    pub y: i64,
    /// The single vertex of `N(v) ∖ N₂(u)` when `|V_A| = 2ε`.
    pub x: Option<usize>,
    /// `Σ d_i` over the two branches meeting `v` when `|V_A| = 2`.
    pub d1_plus_d2: Option<i64>,
    pub records: Vec<InequalityRecord>,
    pub checks: Vec<StructuralCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseBPartition {
    pub u: usize,
    pub v: usize,
    pub v_prime: usize,
    pub u1: usize,
    /// `N(u)` with `u_1` first and the rest ascending.
    pub neighbours_u: Vec<usize>,
    /// `N(v) ∖ {v′}` ascending: `v_1, ..., v_{k-1}`.
    pub neighbours_v: Vec<usize>,
    pub v_a: Vec<usize>,
    pub v_b_prime: Vec<usize>,
    pub v_b_double: Vec<usize>,
    pub v_c_prime: Vec<usize>,
    pub v_c_double: Vec<usize>,
    pub l: Vec<Vec<usize>>,
    pub v_out: Vec<usize>,
    /// `f_B″(w) = (v_s, w)` for each `w ∈ V_B″`, or `None` when `w` has no
    /// unique neighbour in `N(v) ∖ {v′}`.
    pub f_b_double: Vec<(usize, Option<(usize, usize)>)>,
    pub y: i64,
    pub records: Vec<InequalityRecord>,
    pub checks: Vec<StructuralCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GPrimeAudit {
    pub u: usize,
    pub u1: usize,
    /// `N(u)` ordered as the rows of `matrix`.
    pub order: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
    pub total_edges: i64,
    /// `2|E(G′)| = k(k-1)² - 2ε`.
    pub edge_count_holds: bool,
    pub entries_bounded: bool,
    pub degree: InequalityRecord,
}

fn sorted(s: VertexSet) -> Vec<usize> {
    s.iter().collect()
}

struct Shells {
    n1: VertexSet,
    n2: VertexSet,
    n3: VertexSet,
    /// `V ∖ (N(u) ∪ N₂(u))`, including `u` itself.
    ext: VertexSet,
    dist: Vec<Option<usize>>,
}

fn shells(g: &Graph, u: usize) -> Shells {
    let dist = g.distances_from(u);
    let at = |d: usize| -> VertexSet { (0..g.n()).filter(|&x| dist[x] == Some(d)).collect() };
    let n1 = at(1);
    let n2 = at(2);
    Shells {
        n1,
        n2,
        n3: at(3),
        ext: g.vertices() - (n1 | n2),
        dist,
    }
}

fn check_vertex(g: &Graph, v: usize) -> Result<(), AuditError> {
    if v >= g.n() {
        return Err(AuditError::VertexOutOfRange { v, n: g.n() });
    }
    Ok(())
}

/// Regular of degree at least 3 with girth 5; returns `k`.
fn check_shape(g: &Graph) -> Result<usize, AuditError> {
    let k = g.regular_degree().ok_or(AuditError::NotRegular)?;
    if k < 3 {
        return Err(AuditError::DegreeTooSmall(k));
    }
    match girth(g) {
        Girth::Finite(5) => Ok(k),
        other => Err(AuditError::WrongGirth(other)),
    }
}

fn two_eps(k: usize, lambda: u64) -> i64 {
    (k * (k - 1) * (k - 1)) as i64 - 2 * lambda as i64
}

fn in_range(k: usize, t: i64) -> bool {
    t > 0 && t <= k as i64 - 1
}

pub fn audit_outer_edges(g: &Graph, u: usize, lambda: u64) -> Result<OuterEdgeAudit, AuditError> {
    let k = check_shape(g)?;
    check_vertex(g, u)?;
    Ok(outer_edges(g, k, u, lambda))
}

fn outer_edges(g: &Graph, k: usize, u: usize, lambda: u64) -> OuterEdgeAudit {
    let s = shells(g, u);
    let found = g.edges_between(s.n2, s.ext) as i64;
    let inner = g.edges_within(s.n2) as i64;
    let expected = two_eps(k, lambda);
    OuterEdgeAudit {
        root: u,
        two_eps_expected: expected,
        outer_edges_found: found,
        pass: found == expected,
        derivation_holds: (k as i64 - 1) * s.n2.len() as i64 == 2 * inner + found,
    }
}

pub fn audit_main_property(g: &Graph, u: usize) -> Result<MainPropertyAudit, AuditError> {
    check_shape(g)?;
    check_vertex(g, u)?;
    Ok(main_property(g, u))
}

fn main_property(g: &Graph, u: usize) -> MainPropertyAudit {
    let s = shells(g, u);
    let mut violations = Vec::new();
    for v in s.ext {
        let hits: Vec<usize> = (g.neighbors(v) & s.n2).iter().collect();
        for (i, &a) in hits.iter().enumerate() {
            for &b in &hits[i + 1..] {
                violations.push((a, b, v));
            }
        }
    }
    violations.sort_unstable();
    MainPropertyAudit {
        root: u,
        violations,
    }
}

fn branches(g: &Graph, u: usize, order: &[usize]) -> Vec<VertexSet> {
    order
        .iter()
        .map(|&ui| g.neighbors(ui) - VertexSet::singleton(u))
        .collect()
}

pub fn audit_case_a(
    g: &Graph,
    u: usize,
    v: usize,
    lambda: u64,
) -> Result<CaseAPartition, AuditError> {
    let k = check_shape(g)?;
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    case_a(g, k, u, v, lambda)
}

fn case_a(
    g: &Graph,
    k: usize,
    u: usize,
    v: usize,
    lambda: u64,
) -> Result<CaseAPartition, AuditError> {
    let su = shells(g, u);
    if !su.ext.contains(v) || v == u {
        return Err(AuditError::NotExterior { u, v });
    }
    let nv = g.neighbors(v);
    let count = (nv & su.n2).len();
    if count <= 1 {
        return Err(AuditError::CaseMismatch { u, v, count });
    }
    let sv = shells(g, v);
    let (ki, t) = (k as i64, two_eps(k, lambda));
    let va = sv.n2 & su.n1;
    let vb = sv.n2 & su.n2;
    let vc = sv.n2 - (su.n1 | su.n2);
    let order = sorted(su.n1);
    let br = branches(g, u, &order);
    let outside = nv - su.n2;
    let d: Vec<i64> = br
        .iter()
        .map(|b| g.edges_between(*b, outside) as i64)
        .collect();
    let a: Vec<i64> = br.iter().map(|b| b.intersects(&nv) as i64).collect();

    let e = |x: VertexSet, y: VertexSet| g.edges_between(x, y) as i64;
    let w = |x: VertexSet| g.edges_within(x) as i64;
    let (na, nb, nc) = (va.len() as i64, vb.len() as i64, vc.len() as i64);
    let y = w(sv.n2);
    let sum_da: i64 = d.iter().zip(&a).map(|(x, y)| x * y).sum();
    let sum_d_plus_a: i64 = d.iter().zip(&a).map(|(x, y)| x + y).sum();

    use RecordKind::*;
    use RecordName::*;
    use Relation::*;
    let mut records = vec![
        InequalityRecord::new(
            VC_induced,
            (ki - 1) * nc,
            Ge,
            2 * w(vc) + e(vb, vc),
            Identity,
        ),
        InequalityRecord::new(
            VB_induced,
            (ki - 1) * nb,
            Ge,
            e(va, vb) + 2 * w(vb) + e(vb, vc),
            Identity,
        ),
        InequalityRecord::new(VAg, sum_d_plus_a, Le, t, Identity),
        InequalityRecord::new(TwoEpsVA, sum_da, Le, t - na, Identity),
        InequalityRecord::new(EAB, e(va, vb), Le, sum_da + na * (na - 1), Identity),
    ];
    let base = ki * (ki - 1) * (ki - 1);
    records.push(if in_range(k, t) {
        // The contradiction: 2Y < k(k-1)² - 2ε.
        InequalityRecord::new(Y_bound_caseA, 2 * y, Le, base - t - 1, RangeConditional)
    } else {
        InequalityRecord::new(
            Y_bound_caseA,
            2 * y,
            Le,
            base + t + (2 - 2 * ki).max(t * t - t * (ki + 1)),
            Identity,
        )
    });

    let checks = vec![
        check(
            "partition_sizes",
            na + nb + nc == sv.n2.len() as i64 && sv.n2.len() == k * (k - 1),
        ),
        check("v_a_at_least_two", na >= 2),
        check("v_a_equals_sum_a", na == a.iter().sum::<i64>()),
        check(
            "y_decomposition",
            y == e(va, vb) + w(vb) + e(vb, vc) + w(vc) && w(va) == 0 && e(va, vc) == 0,
        ),
    ];

    let x = (na == t && outside.len() == 1).then(|| outside.first().unwrap());
    let d1_plus_d2 = (na == 2).then_some(sum_da);

    Ok(CaseAPartition {
        u,
        v,
        v_a: sorted(va),
        v_b: sorted(vb),
        v_c: sorted(vc),
        neighbours_u: order,
        branches: br.into_iter().map(sorted).collect(),
        d,
        a,
        y,
        x,
        d1_plus_d2,
        records,
        checks,
    })
}

pub fn audit_case_b(
    g: &Graph,
    u: usize,
    v: usize,
    lambda: u64,
) -> Result<CaseBPartition, AuditError> {
    let k = check_shape(g)?;
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    case_b(g, k, u, v, lambda)
}

fn case_b(
    g: &Graph,
    k: usize,
    u: usize,
    v: usize,
    lambda: u64,
) -> Result<CaseBPartition, AuditError> {
    let su = shells(g, u);
    let dist = su.dist[v].unwrap_or(usize::MAX);
    if dist != 3 {
        if dist < 3 {
            return Err(AuditError::NotExterior { u, v });
        }
        return Err(AuditError::NotInN3 { u, v, dist });
    }
    let nv = g.neighbors(v);
    let count = (nv & su.n2).len();
    if count != 1 {
        return Err(AuditError::CaseMismatch { u, v, count });
    }
    let mp = main_property(g, u);
    if let Some(&witness) = mp.violations.first() {
        return Err(AuditError::PropertyViolated { u, witness });
    }
    let vp = (nv & su.n2).first().unwrap();
    let u1 = (g.neighbors(vp) & su.n1).first().unwrap();
    let mut order = vec![u1];
    order.extend(su.n1.iter().filter(|&x| x != u1));
    let nv_rest = nv - VertexSet::singleton(vp);
    let vs: Vec<usize> = sorted(nv_rest);

    let sv = shells(g, v);
    let nvp = g.neighbors(vp);
    let va = sv.n2 & su.n1;
    let vb = sv.n2 & su.n2;
    let vb1 = vb & nvp;
    let vb2 = vb - nvp;
    let vc = sv.n2 - (su.n1 | su.n2);
    let vc1 = vc & nvp;
    let vc2 = vc - nvp;
    let l: Vec<VertexSet> = vs.iter().map(|&vi| g.neighbors(vi) & vc2).collect();
    let v_out = g.vertices() - (vc | vb | va);
    // Edges into V_Out are counted away from N(v), matching the sums over
    // V ∖ N(v) they come from.
    let v_out_far = v_out - nv;

    let e = |x: VertexSet, y: VertexSet| g.edges_between(x, y) as i64;
    let w = |x: VertexSet| g.edges_within(x) as i64;
    let sz = |x: VertexSet| x.len() as i64;
    let (ki, t) = (k as i64, two_eps(k, lambda));
    let y = w(sv.n2);
    let nu1 = g.neighbors(u1);

    use RecordKind::*;
    use RecordName::*;
    use Relation::*;
    let mut records = vec![
        InequalityRecord::new(
            VB_induced,
            (ki - 1) * sz(vb),
            Ge,
            e(va, vb) + 2 * w(vb) + e(vb, vc),
            Identity,
        ),
        InequalityRecord::new(
            VC_induced_new,
            (ki - 1) * sz(vc),
            Ge,
            2 * w(vc) + e(vb, vc) + (ki - 1) * (ki - 1 - sz(vc1)) - sz(vb2) - e(vc2, vb),
            Identity,
        ),
        InequalityRecord::new(
            outer_bound1,
            sz(vb2) + sz(vc1) + 1 + e(vb, vc2),
            Le,
            t,
            Identity,
        ),
        InequalityRecord::new(
            outer_bound2,
            2 * (sz(vb2 & nu1) + sz(vc1) + 1),
            Le,
            t,
            RangeConditional,
        ),
        InequalityRecord::new(EAB_new, e(va, vb), Eq, sz(vb2 & nu1), Identity),
    ];
    let base = ki * (ki - 1) * (ki - 1);
    records.push(if in_range(k, t) {
        InequalityRecord::new(Y_bound_caseB, 2 * y, Le, base - t - 1, RangeConditional)
    } else {
        // Doubled to keep 3ε integral.
        InequalityRecord::new(
            Y_bound_caseB,
            4 * y,
            Le,
            2 * base - 2 * (ki - 1) * (ki - sz(vc1)) + 3 * t - 4 * sz(vc1) - 4,
            RangeConditional,
        )
    });
    for (i, &li) in l.iter().enumerate() {
        let idx = i + 1;
        records.push(InequalityRecord::new(LCprime, e(li, vc1), Le, sz(vc1), Identity).at(idx));
        records.push(
            InequalityRecord::new(
                LCdoubleprime,
                e(li, vc2 - li),
                Le,
                sz(li) * (ki - 2),
                Identity,
            )
            .at(idx),
        );
        records.push(
            InequalityRecord::new(
                Li_expansion,
                (ki - 1) * sz(li),
                Eq,
                2 * w(li) + e(li, vc2 - li) + e(li, vc1) + e(li, vb) + e(li, v_out_far),
                Identity,
            )
            .at(idx),
        );
    }
    let sum_l: i64 = l.iter().map(|&li| sz(li) - sz(vc1)).sum();
    records.push(InequalityRecord::new(
        Vout_bound,
        e(vc2, v_out_far) + e(vc2, vb),
        Ge,
        sum_l,
        Identity,
    ));
    let gp = gprime(g, k, u, &order, lambda);
    records.push(gp.degree.clone());

    // f_B″ and its target E(N(v) ∖ {v′}, N₂(u)).
    let f: Vec<(usize, Option<(usize, usize)>)> = vb2
        .iter()
        .map(|x| {
            let hit = g.neighbors(x) & nv_rest;
            (x, (hit.len() == 1).then(|| (hit.first().unwrap(), x)))
        })
        .collect();
    let mut target: Vec<(usize, usize)> = Vec::new();
    for s in nv_rest {
        for x in g.neighbors(s) & su.n2 {
            target.push((s, x));
        }
    }
    target.sort_unstable();
    let mut image: Vec<(usize, usize)> = f.iter().filter_map(|&(_, e)| e).collect();
    image.sort_unstable();
    let bijective = f.iter().all(|(_, e)| e.is_some()) && image == target;

    let l_union = l.iter().fold(VertexSet::empty(), |acc, &x| acc | x);
    let l_disjoint = l.iter().map(|x| x.len()).sum::<usize>() == l_union.len();
    let short = l.iter().filter(|x| x.len() + 2 == k).count();
    let checks = vec![
        check(
            "partition_sizes",
            sz(va) + sz(vb) + sz(vc) == sz(sv.n2)
                && sv.n2.len() == k * (k - 1)
                && sz(vb1) + sz(vb2) == sz(vb)
                && sz(vc1) + sz(vc2) == sz(vc),
        ),
        check("v_a_is_u1", va == VertexSet::singleton(u1)),
        check("l_disjoint_cover", l_disjoint && l_union == vc2),
        check(
            "important_absence",
            e(
                vc1 | VertexSet::singleton(v),
                su.n2 - VertexSet::singleton(vp),
            ) == 0,
        ),
        check("f_b_double_bijective", bijective),
        check("l_at_least_k_minus_2", l.iter().all(|x| x.len() + 2 >= k)),
        check("short_l_count_equals_v_b_double", short == vb2.len()),
        check(
            "y_decomposition",
            y == e(va, vb) + w(vb) + e(vb, vc) + w(vc),
        ),
    ];

    Ok(CaseBPartition {
        u,
        v,
        v_prime: vp,
        u1,
        neighbours_u: order,
        neighbours_v: vs,
        v_a: sorted(va),
        v_b_prime: sorted(vb1),
        v_b_double: sorted(vb2),
        v_c_prime: sorted(vc1),
        v_c_double: sorted(vc2),
        l: l.into_iter().map(sorted).collect(),
        v_out: sorted(v_out),
        f_b_double: f,
        y,
        records,
        checks,
    })
}

/// The multigraph on `N(u)` whose edge multiplicities count edges between
/// second-shell branches, with the degree claim for `u_{u1_index}` (indices
/// follow ascending `N(u)`, starting at 1).
pub fn audit_gprime_degree(
    g: &Graph,
    u: usize,
    u1_index: usize,
    lambda: u64,
) -> Result<GPrimeAudit, AuditError> {
    let k = check_shape(g)?;
    check_vertex(g, u)?;
    if u1_index == 0 || u1_index > k {
        return Err(AuditError::IndexOutOfRange { index: u1_index, k });
    }
    let asc = sorted(g.neighbors(u));
    let u1 = asc[u1_index - 1];
    let mut order = vec![u1];
    order.extend(asc.iter().copied().filter(|&x| x != u1));
    Ok(gprime(g, k, u, &order, lambda))
}

fn gprime(g: &Graph, k: usize, u: usize, order: &[usize], lambda: u64) -> GPrimeAudit {
    let br = branches(g, u, order);
    let matrix: Vec<Vec<i64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        0
                    } else {
                        g.edges_between(br[i], br[j]) as i64
                    }
                })
                .collect()
        })
        .collect();
    let total: i64 = matrix.iter().flatten().sum::<i64>() / 2;
    let t = two_eps(k, lambda);
    let ki = k as i64;
    let deg: i64 = matrix[0].iter().sum();
    GPrimeAudit {
        u,
        u1: order[0],
        order: order.to_vec(),
        total_edges: total,
        edge_count_holds: 2 * total == ki * (ki - 1) * (ki - 1) - t,
        entries_bounded: matrix.iter().flatten().all(|&m| m <= ki - 1),
        matrix,
        degree: InequalityRecord::new(
            RecordName::Gprime_degree,
            2 * deg,
            Relation::Ge,
            2 * (ki - 1) * (ki - 1) - t,
            RecordKind::RangeConditional,
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditScope {
    AllPairs,
    SampledPairs { seed: u64, count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkippedPair {
    pub u: usize,
    pub v: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootAudit {
    pub outer: OuterEdgeAudit,
    pub main_property: MainPropertyAudit,
    pub gprime: GPrimeAudit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditSummary {
    pub all_pass: bool,
    pub roots: usize,
    pub case_a: usize,
    pub case_b: usize,
    pub skipped: usize,
    pub identity_failures: usize,
    pub range_conditional_failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub graph6: String,
    pub n: usize,
    pub k: usize,
    pub lambda_true: u64,
    pub lambda_claimed: u64,
    pub two_epsilon: i64,
    pub in_theorem_range: bool,
    pub scope: AuditScope,
    pub roots: Vec<RootAudit>,
    pub case_a: Vec<CaseAPartition>,
    pub case_b: Vec<CaseBPartition>,
    pub skipped: Vec<SkippedPair>,
    pub summary: AuditSummary,
}

#[derive(Clone, Debug)]
pub struct AuditOptions {
    pub scope: AuditScope,
    /// Claimed λ; defaults to the measured one.
    pub lambda: Option<u64>,
    pub workers: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            scope: AuditScope::AllPairs,
            lambda: None,
            workers: 1,
        }
    }
}

/// Checks the audit preconditions and returns `(k, λ)`.
pub fn audit_preconditions(g: &Graph) -> Result<(usize, u64), AuditError> {
    if !g.is_connected() {
        return Err(AuditError::Disconnected);
    }
    let k = check_shape(g)?;
    let profile = girth_profile(g).map_err(|_| AuditError::WrongGirth(girth(g)))?;
    let l0 = profile.per_vertex[0];
    if let Some(v) = (0..g.n()).find(|&v| profile.per_vertex[v] != l0) {
        return Err(AuditError::NotVgr {
            u: 0,
            v,
            lambda_u: l0,
            lambda_v: profile.per_vertex[v],
        });
    }
    Ok((k, l0))
}

enum PairResult {
    A(CaseAPartition),
    B(CaseBPartition),
    Skipped(SkippedPair),
}

pub fn audit_graph(g: &Graph, opts: &AuditOptions) -> Result<AuditReport, AuditError> {
    let (k, lambda_true) = audit_preconditions(g)?;
    let lambda = opts.lambda.unwrap_or(lambda_true);
    let t = two_eps(k, lambda);

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut skipped = Vec::new();
    for u in 0..g.n() {
        let s = shells(g, u);
        for v in s.ext {
            if s.n3.contains(v) {
                pairs.push((u, v));
            } else if v != u {
                skipped.push(SkippedPair {
                    u,
                    v,
                    reason: "distance greater than 3".into(),
                });
            }
        }
    }
    if let AuditScope::SampledPairs { seed, count } = opts.scope {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        pairs = pairs
            .choose_multiple(&mut rng, count.min(pairs.len()))
            .copied()
            .collect();
        pairs.sort_unstable();
        skipped.clear();
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .expect("thread pool");
    let (roots, results): (Vec<RootAudit>, Vec<PairResult>) = pool.install(|| {
        let roots = (0..g.n())
            .into_par_iter()
            .map(|u| {
                let mut order = vec![];
                order.extend(sorted(g.neighbors(u)));
                RootAudit {
                    outer: outer_edges(g, k, u, lambda),
                    main_property: main_property(g, u),
                    gprime: gprime(g, k, u, &order, lambda),
                }
            })
            .collect();
        let results = pairs
            .par_iter()
            .map(|&(u, v)| {
                let count = (g.neighbors(v) & shells(g, u).n2).len();
                let r = if count >= 2 {
                    case_a(g, k, u, v, lambda).map(PairResult::A)
                } else {
                    case_b(g, k, u, v, lambda).map(PairResult::B)
                };
                r.unwrap_or_else(|e| {
                    PairResult::Skipped(SkippedPair {
                        u,
                        v,
                        reason: e.to_string(),
                    })
                })
            })
            .collect();
        (roots, results)
    });

    let mut case_a_list = Vec::new();
    let mut case_b_list = Vec::new();
    for r in results {
        match r {
            PairResult::A(a) => case_a_list.push(a),
            PairResult::B(b) => case_b_list.push(b),
            PairResult::Skipped(s) => skipped.push(s),
        }
    }
    skipped.sort_by_key(|s| (s.u, s.v));

    let summary = summarize(&roots, &case_a_list, &case_b_list, skipped.len());
    Ok(AuditReport {
        graph6: write_graph6(g),
        n: g.n(),
        k,
        lambda_true,
        lambda_claimed: lambda,
        two_epsilon: t,
        in_theorem_range: in_range(k, t),
        scope: opts.scope.clone(),
        roots,
        case_a: case_a_list,
        case_b: case_b_list,
        skipped,
        summary,
    })
}

fn summarize(
    roots: &[RootAudit],
    a: &[CaseAPartition],
    b: &[CaseBPartition],
    skipped: usize,
) -> AuditSummary {
    let mut first: Option<String> = None;
    let mut note = |s: String| {
        if first.is_none() {
            first = Some(s);
        }
    };
    let mut identity_failures = 0;
    let mut range_failures = 0;
    for r in roots {
        let u = r.outer.root;
        if !r.outer.pass {
            identity_failures += 1;
            note(format!(
                "outer edges at u={u}: found {} expected {}",
                r.outer.outer_edges_found, r.outer.two_eps_expected
            ));
        }
        if !r.outer.derivation_holds {
            identity_failures += 1;
            note(format!("outer-edge derivation at u={u}"));
        }
        if !r.gprime.edge_count_holds {
            identity_failures += 1;
            note(format!("G′ edge count at u={u}: {}", r.gprime.total_edges));
        }
        if !r.gprime.entries_bounded {
            identity_failures += 1;
            note(format!("G′ multiplicity above k-1 at u={u}"));
        }
    }
    let mut scan =
        |u: usize, v: usize, records: &[InequalityRecord], checks: &[StructuralCheck]| {
            for rec in records.iter().filter(|r| !r.holds) {
                match rec.kind {
                    RecordKind::Identity => {
                        identity_failures += 1;
                        note(format!(
                            "{:?}{} at (u={u}, v={v}): {} {:?} {}",
                            rec.name,
                            rec.index.map(|i| format!("[{i}]")).unwrap_or_default(),
                            rec.lhs,
                            rec.relation,
                            rec.rhs
                        ));
                    }
                    RecordKind::RangeConditional => range_failures += 1,
                }
            }
            for c in checks.iter().filter(|c| !c.holds) {
                identity_failures += 1;
                note(format!("{} at (u={u}, v={v})", c.name));
            }
        };
    for p in a {
        scan(p.u, p.v, &p.records, &p.checks);
    }
    for p in b {
        scan(p.u, p.v, &p.records, &p.checks);
    }
    AuditSummary {
        all_pass: identity_failures == 0,
        roots: roots.len(),
        case_a: a.len(),
        case_b: b.len(),
        skipped,
        identity_failures,
        range_conditional_failures: range_failures,
        first_failure: first,
    }
}
