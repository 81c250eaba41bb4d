//! Vertex-, girth- and edge-girth-regularity, the counting bounds, and the
//! table of parameter triples ruled out by known non-existence theorems.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::girth::{girth_profile, signature, Girth, GirthError, GirthProfile, Signature};
use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is acyclic")]
    Acyclic,
    #[error("profile does not belong to this graph: {0}")]
    ProfileMismatch(String),
    #[error("parameter out of range: {0}")]
    Domain(String),
    #[error("arithmetic overflow evaluating bounds for k={k}, g={g}")]
    Overflow { k: u64, g: u64 },
    /// A vertex-girth-regular graph of odd girth with `0 < ε ≤ (k-1)/2`
    /// cannot exist; seeing one means the counts are wrong.
    #[error(
        "inconsistent: vgr(n={n}, k={k}, g={g}, λ={lambda}) has 2ε={two_epsilon} in the excluded range (0, k-1]"
    )]
    ExcludedParameters {
        n: usize,
        k: usize,
        g: usize,
        lambda: u64,
        two_epsilon: i64,
    },
}

impl From<GirthError> for ClassifyError {
    fn from(e: GirthError) -> Self {
        match e {
            GirthError::Acyclic => ClassifyError::Acyclic,
            other => ClassifyError::ProfileMismatch(other.to_string()),
        }
    }
}

/// Twice the per-vertex bound, `k (k-1)^⌊g/2⌋`.
pub fn two_vertex_bound(k: u64, g: u64) -> Result<u64, ClassifyError> {
    let e = edge_bound(k, g)?;
    k.checked_mul(e).ok_or(ClassifyError::Overflow { k, g })
}

/// Per-edge bound `(k-1)^⌊g/2⌋`.
pub fn edge_bound(k: u64, g: u64) -> Result<u64, ClassifyError> {
    if k == 0 {
        return Err(ClassifyError::Domain("k must be positive".into()));
    }
    (k - 1)
        .checked_pow((g / 2) as u32)
        .ok_or(ClassifyError::Overflow { k, g })
}

/// The Moore bound `M(k, g)`.
pub fn moore_bound(k: u64, g: u64) -> Result<u64, ClassifyError> {
    if k < 2 || g < 3 {
        return Err(ClassifyError::Domain(format!(
            "Moore bound needs k >= 2 and g >= 3 (got k={k}, g={g})"
        )));
    }
    let overflow = || ClassifyError::Overflow { k, g };
    let geometric = |terms: u64| -> Result<u64, ClassifyError> {
        let mut sum = 0u64;
        let mut pow = 1u64;
        for i in 0..terms {
            if i > 0 {
                pow = pow.checked_mul(k - 1).ok_or_else(overflow)?;
            }
            sum = sum.checked_add(pow).ok_or_else(overflow)?;
        }
        Ok(sum)
    };
    if g % 2 == 1 {
        let s = geometric((g - 3) / 2 + 1)?;
        k.checked_mul(s)
            .and_then(|x| x.checked_add(1))
            .ok_or_else(overflow)
    } else {
        geometric(g / 2)?.checked_mul(2).ok_or_else(overflow)
    }
}

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halves(pub i64);

impl fmt::Display for Halves {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for Halves {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub n: usize,
    /// `None` when the graph is not regular.
    pub k: Option<usize>,
    pub girth: Girth,
    pub is_vgr: bool,
    pub lambda_vertex: Option<u64>,
    pub is_gr: bool,
    pub signature: Option<Signature>,
    pub is_egr: bool,
    pub lambda_edge: Option<u64>,
    pub max_lambda_vertex: u64,
    pub max_lambda_edge: u64,
    pub total_girth_cycles: u64,
    /// `k (k-1)^⌊g/2⌋ / 2`, as a half-integer.
    pub vertex_bound: Option<Halves>,
    pub edge_bound: Option<u64>,
    /// `vertex_bound - λ`, only for vgr graphs.
    pub epsilon: Option<Halves>,
    pub moore_bound: Option<u64>,
    pub moore_deficit: Option<i64>,
}

impl ClassificationReport {
    pub fn two_epsilon(&self) -> Option<i64> {
        self.epsilon.map(|e| e.0)
    }
}

/// Classifies a connected graph with at least one cycle.
pub fn classify(g: &Graph) -> Result<ClassificationReport, ClassifyError> {
    if !g.is_connected() {
        return Err(ClassifyError::Disconnected);
    }
    let profile = girth_profile(g)?;
    classify_with_profile(g, &profile)
}

/// Classification from a precomputed (possibly forged) profile.
pub fn classify_with_profile(
    g: &Graph,
    profile: &GirthProfile,
) -> Result<ClassificationReport, ClassifyError> {
    if !g.is_connected() {
        return Err(ClassifyError::Disconnected);
    }
    if profile.per_vertex.len() != g.n() {
        return Err(ClassifyError::ProfileMismatch(format!(
            "{} vertex counts for {} vertices",
            profile.per_vertex.len(),
            g.n()
        )));
    }
    let gi = profile.girth;
    let k = g.regular_degree();
    let first_vertex = profile.per_vertex.first().copied();
    let all_vertex_equal = profile.per_vertex.iter().all(|&c| Some(c) == first_vertex);
    let is_vgr = k.is_some() && all_vertex_equal;

    let signatures = (0..g.n())
        .map(|v| signature(g, v, profile))
        .collect::<Result<Vec<_>, _>>()?;
    let is_gr = is_vgr && signatures.windows(2).all(|w| w[0] == w[1]);

    let first_edge = profile.per_edge.values().next().copied();
    let is_egr = is_gr && profile.per_edge.values().all(|&c| Some(c) == first_edge);
    debug_assert!(!is_egr || is_gr);
    debug_assert!(!is_gr || is_vgr);

    let (vertex_bound, edge_bound_v, moore, deficit) = match k {
        Some(k) if k >= 2 => {
            let (k64, g64) = (k as u64, gi as u64);
            let two_vb = two_vertex_bound(k64, g64)?;
            let eb = edge_bound(k64, g64)?;
            let m = moore_bound(k64, g64)?;
            (
                Some(Halves(two_vb as i64)),
                Some(eb),
                Some(m),
                Some(g.n() as i64 - m as i64),
            )
        }
        _ => (None, None, None, None),
    };

    let lambda_vertex = is_vgr.then(|| first_vertex.unwrap_or(0));
    let epsilon = match (lambda_vertex, vertex_bound) {
        (Some(l), Some(vb)) => Some(Halves(vb.0 - 2 * l as i64)),
        _ => None,
    };

    let report = ClassificationReport {
        n: g.n(),
        k,
        girth: Girth::Finite(gi),
        is_vgr,
        lambda_vertex,
        is_gr,
        signature: if is_gr {
            signatures.first().cloned()
        } else {
            None
        },
        is_egr,
        lambda_edge: if is_egr { first_edge } else { None },
        max_lambda_vertex: profile.per_vertex.iter().copied().max().unwrap_or(0),
        max_lambda_edge: profile.per_edge.values().copied().max().unwrap_or(0),
        total_girth_cycles: profile.total_girth_cycles,
        vertex_bound,
        edge_bound: edge_bound_v,
        epsilon,
        moore_bound: moore,
        moore_deficit: deficit,
    };

    if let (Some(k), Some(two_eps), Some(lambda)) = (k, report.two_epsilon(), lambda_vertex) {
        if k >= 3 && gi % 2 == 1 && two_eps > 0 && two_eps <= k as i64 - 1 {
            return Err(ClassifyError::ExcludedParameters {
                n: g.n(),
                k,
                g: gi,
                lambda,
                two_epsilon: two_eps,
            });
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `λ_v ≤ k (k-1)^⌊g/2⌋ / 2`, checked on the largest vertex count.
    PerVertex,
    /// `n(e) ≤ (k-1)^⌊g/2⌋`, checked on the largest edge count.
    PerEdge,
    /// `n ≥ M(k, g)`.
    MooreOrder,
}

/// One evaluated bound. Quantities are doubled where the right-hand side
/// may be a half-integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub bound: BoundKind,
    pub lhs: Halves,
    pub rhs: Halves,
    pub slack: Halves,
    pub holds: bool,
}

/// Evaluates the per-vertex, per-edge and Moore bounds. Every real graph
/// satisfies all three; a failure indicates a counting bug. Non-regular
/// graphs yield no records.
pub fn check_bounds(g: &Graph, report: &ClassificationReport) -> Vec<BoundCheck> {
    let (Some(vb), Some(eb), Some(m)) =
        (report.vertex_bound, report.edge_bound, report.moore_bound)
    else {
        return Vec::new();
    };
    let le = |bound, lhs: i64, rhs: i64| BoundCheck {
        bound,
        lhs: Halves(lhs),
        rhs: Halves(rhs),
        slack: Halves(rhs - lhs),
        holds: lhs <= rhs,
    };
    let mut out = vec![
        le(
            BoundKind::PerVertex,
            2 * report.max_lambda_vertex as i64,
            vb.0,
        ),
        le(
            BoundKind::PerEdge,
            2 * report.max_lambda_edge as i64,
            2 * eb as i64,
        ),
    ];
    let n2 = 2 * g.n() as i64;
    out.push(BoundCheck {
        bound: BoundKind::MooreOrder,
        lhs: Halves(n2),
        rhs: Halves(2 * m as i64),
        slack: Halves(n2 - 2 * m as i64),
        holds: n2 >= 2 * m as i64,
    });
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictStatus {
    ExcludedByTheorem,
    KnownToExist,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictRule {
    EvenGirthSignature,
    OddGirthGe7,
    Girth3,
    Girth5,
    MooreCase,
    None,
}

impl VerdictRule {
    pub fn theorem(&self) -> &'static str {
        match self {
            VerdictRule::EvenGirthSignature => "even-girth signature gap theorem",
            VerdictRule::OddGirthGe7 => "odd girth >= 7 vgr non-existence theorem",
            VerdictRule::Girth3 => "girth-3 vgr non-existence theorem",
            VerdictRule::Girth5 => "girth-5 vgr non-existence theorem",
            VerdictRule::MooreCase => "Moore graph",
            VerdictRule::None => "none",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonexistenceVerdict {
    pub status: VerdictStatus,
    pub rule: VerdictRule,
    pub detail: String,
}

impl fmt::Display for NonexistenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({:?}): {}", self.status, self.rule, self.detail)
    }
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut r = q;
            while r % p == 0 {
                r /= p;
            }
            return r == 1;
        }
        p += 1;
    }
    true
}

/// Whether a `vgr(n, k, g, λ)` graph is ruled out by a known theorem, known
/// to exist as a Moore graph, or neither.
pub fn known_nonexistence(
    k: u64,
    g: u64,
    lambda: u64,
) -> Result<NonexistenceVerdict, ClassifyError> {
    if k < 3 || g < 3 {
        return Err(ClassifyError::Domain(format!(
            "need k >= 3 and g >= 3 (got k={k}, g={g})"
        )));
    }
    let two_bound = two_vertex_bound(k, g)?;
    let two_lambda = lambda
        .checked_mul(2)
        .ok_or(ClassifyError::Overflow { k, g })?;
    if two_lambda > two_bound {
        return Err(ClassifyError::Domain(format!(
            "λ={lambda} exceeds the per-vertex bound {}",
            Halves(two_bound as i64)
        )));
    }
    let two_eps = two_bound - two_lambda;
    let eps = Halves(two_eps as i64);

    if g % 2 == 1 && two_eps > 0 && two_eps < k {
        // 0 < ε ≤ (k-1)/2
        if two_eps % 2 == 1 {
            return Ok(NonexistenceVerdict {
                status: VerdictStatus::Unknown,
                rule: VerdictRule::None,
                detail: format!("ε={eps} is not an integer; the theorems cover integer ε only"),
            });
        }
        let rule = match g {
            3 => VerdictRule::Girth3,
            5 => VerdictRule::Girth5,
            _ => VerdictRule::OddGirthGe7,
        };
        return Ok(NonexistenceVerdict {
            status: VerdictStatus::ExcludedByTheorem,
            rule,
            detail: format!(
                "ε={eps} lies in (0, (k-1)/2] for odd girth {g}; {}",
                rule.theorem()
            ),
        });
    }

    if two_eps == 0 {
        let moore = match (k, g) {
            (_, 3) | (_, 4) => Some(true),
            (_, 6) | (_, 8) | (_, 12) => {
                // generalized polygons of order k-1 exist for prime powers
                if is_prime_power(k - 1) {
                    Some(true)
                } else {
                    None
                }
            }
            (3, 5) | (7, 5) => Some(true),
            _ => None,
        };
        return Ok(match moore {
            Some(_) => NonexistenceVerdict {
                status: VerdictStatus::KnownToExist,
                rule: VerdictRule::MooreCase,
                detail: format!("λ attains the per-vertex bound: the ({k},{g}) Moore graph"),
            },
            None if (k, g) == (57, 5) => NonexistenceVerdict {
                status: VerdictStatus::Unknown,
                rule: VerdictRule::None,
                detail: "λ at the bound would be the (57,5) Moore graph, whose existence is open"
                    .into(),
            },
            None => NonexistenceVerdict {
                status: VerdictStatus::Unknown,
                rule: VerdictRule::None,
                detail: format!(
                    "λ at the bound requires a ({k},{g}) Moore graph, not known to exist"
                ),
            },
        });
    }

    Ok(NonexistenceVerdict {
        status: VerdictStatus::Unknown,
        rule: VerdictRule::None,
        detail: format!("ε={eps} is outside every known exclusion range"),
    })
}

/// Refutes a claimed signature of a girth-regular graph of even girth when
/// its largest entry is `(k-1)^{g/2} - ε` with `0 < ε < k-1`.
pub fn refute_signature(
    k: u64,
    g: u64,
    sig: &Signature,
) -> Result<NonexistenceVerdict, ClassifyError> {
    if k < 3 || g < 3 {
        return Err(ClassifyError::Domain(format!(
            "need k >= 3 and g >= 3 (got k={k}, g={g})"
        )));
    }
    if sig.0.len() as u64 != k {
        return Err(ClassifyError::Domain(format!(
            "signature has {} entries, expected {k}",
            sig.0.len()
        )));
    }
    let top = *sig.0.iter().max().unwrap();
    let eb = edge_bound(k, g)?;
    if g % 2 == 0 && top < eb && eb - top < k - 1 {
        return Ok(NonexistenceVerdict {
            status: VerdictStatus::ExcludedByTheorem,
            rule: VerdictRule::EvenGirthSignature,
            detail: format!(
                "largest entry {top} = (k-1)^(g/2) - {} with 0 < ε < k-1",
                eb - top
            ),
        });
    }
    Ok(NonexistenceVerdict {
        status: VerdictStatus::Unknown,
        rule: VerdictRule::None,
        detail: "signature outside the even-girth exclusion range".into(),
    })
}
