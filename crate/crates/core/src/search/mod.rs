//! Isomorph-free generation of connected k-regular graphs of given girth.

mod accept;
mod frontier;
mod state;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::MAX_VERTICES;
use crate::classify::{moore_bound, two_vertex_bound};
use crate::format::{parse_graph6, write_graph6};
use crate::graph::{Graph, MAX_N_ENV};

pub use frontier::{Frontier, FrontierEntry};
use state::{Params, State, Step};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error(
        "parity violation: no {k}-regular graph has an odd number of vertices (n_max={n_max})"
    )]
    Parity { k: usize, n_max: usize },
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GirthMode {
    Exactly,
    AtLeast,
}

impl GirthMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            GirthMode::Exactly => "exactly",
            GirthMode::AtLeast => "at_least",
        }
    }

    pub fn parse(s: &str) -> Option<GirthMode> {
        match s {
            "exactly" => Some(GirthMode::Exactly),
            "at_least" | "at-least" => Some(GirthMode::AtLeast),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub k: usize,
    pub g: usize,
    pub n_max: usize,
    pub girth_mode: GirthMode,
    /// Keep only graphs whose vertices all lie on exactly this many girth
    /// cycles.
    pub lambda_filter: Option<u64>,
    /// Also cut branches where some vertex already exceeds the filter. The
    /// enumerated counts then cover only the pruned space.
    pub lambda_pruning: bool,
    pub workers: usize,
    pub seed: u64,
    /// Completion depth at which the tree is split into work units.
    pub split_depth: usize,
    /// Accept only canonical leaves. When off, every leaf is kept and the
    /// result is deduplicated afterwards.
    pub canonical_filter: bool,
    /// Suspend once this run has expanded this many more nodes.
    pub node_budget: Option<u64>,
}

impl SearchConfig {
    pub fn new(k: usize, g: usize, n_max: usize) -> SearchConfig {
        SearchConfig {
            k,
            g,
            n_max,
            girth_mode: GirthMode::AtLeast,
            lambda_filter: None,
            lambda_pruning: false,
            workers: 1,
            seed: 0,
            split_depth: 4,
            canonical_filter: true,
            node_budget: None,
        }
    }
}

/// Largest `n_max` accepted for degree `k`: 20 for cubic graphs and 16
/// otherwise, unless `GIRTHLAB_MAX_N` says otherwise.
pub fn search_cap(k: usize) -> usize {
    let default = if k == 3 { 20 } else { 16 };
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .unwrap_or(default)
        .min(MAX_VERTICES)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NCounts {
    /// Isomorphism classes enumerated at this order.
    pub enumerated: u64,
    /// Classes passing the λ filter (all of them without a filter).
    pub hits: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Complete,
    Suspended,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub k: usize,
    pub g: usize,
    pub n_max: usize,
    pub girth_mode: GirthMode,
    pub lambda_filter: Option<u64>,
    pub lambda_pruned: bool,
    pub status: SearchStatus,
    pub per_n: BTreeMap<usize, NCounts>,
    /// graph6 of each hit's canonical form, ordered by order then text.
    pub hits: Vec<String>,
    pub nodes_expanded: u64,
    #[serde(skip)]
    pub wall_time: Duration,
    #[serde(skip)]
    pub frontier: Option<Frontier>,
}

impl SearchOutcome {
    pub fn total_enumerated(&self) -> u64 {
        self.per_n.values().map(|c| c.enumerated).sum()
    }

    pub fn total_hits(&self) -> u64 {
        self.per_n.values().map(|c| c.hits).sum()
    }

    fn empty(c: &SearchConfig) -> SearchOutcome {
        SearchOutcome {
            k: c.k,
            g: c.g,
            n_max: c.n_max,
            girth_mode: c.girth_mode,
            lambda_filter: c.lambda_filter,
            lambda_pruned: c.lambda_pruning && c.lambda_filter.is_some(),
            status: SearchStatus::Complete,
            per_n: BTreeMap::new(),
            hits: Vec::new(),
            nodes_expanded: 0,
            wall_time: Duration::ZERO,
            frontier: None,
        }
    }
}

struct Found {
    n: usize,
    graph6: String,
    canon: Graph,
    hit: bool,
}

struct Unit {
    state: State,
    cursor: usize,
}

fn validate(c: &SearchConfig) -> Result<bool, SearchError> {
    if c.k < 2 || c.g < 3 {
        return Err(SearchError::Range(format!(
            "need k >= 2 and g >= 3 (got k={}, g={})",
            c.k, c.g
        )));
    }
    let cap = search_cap(c.k);
    if c.n_max > cap {
        return Err(SearchError::Range(format!(
            "n_max={} exceeds the search cap {cap} for k={} (set {MAX_N_ENV} to raise it)",
            c.n_max, c.k
        )));
    }
    if c.workers == 0 {
        return Err(SearchError::Range("workers must be at least 1".into()));
    }
    let m = moore_bound(c.k as u64, c.g as u64).map_err(|e| SearchError::Range(e.to_string()))?;
    if (c.n_max as u64) < m {
        return Ok(false);
    }
    if c.k % 2 == 1 && c.n_max % 2 == 1 {
        return Err(SearchError::Parity {
            k: c.k,
            n_max: c.n_max,
        });
    }
    Ok(true)
}

fn params(c: &SearchConfig) -> Params {
    let mut p = Params::new(c.k, c.g, c.n_max);
    if c.lambda_pruning {
        p.count_cap = c.lambda_filter;
        p.root_target = c.lambda_filter;
    }
    p
}

/// Runs a search, calling `visit` on the canonical form of every enumerated
/// class in (order, graph6) order.
pub fn generate(
    c: &SearchConfig,
    visit: &mut dyn FnMut(&Graph),
) -> Result<SearchOutcome, SearchError> {
    let start = Instant::now();
    if !validate(c)? {
        let mut out = SearchOutcome::empty(c);
        out.wall_time = start.elapsed();
        return Ok(out);
    }
    let p = params(c);
    let nodes = AtomicU64::new(0);
    let mut units = Vec::new();
    prefix_units(c, &p, State::tree(&p), &mut units, &nodes);
    run_units(
        c,
        &p,
        units,
        nodes.into_inner(),
        BTreeMap::new(),
        Vec::new(),
        start,
        visit,
    )
}

/// Continues a suspended search from its checkpoint.
pub fn resume(
    c: &SearchConfig,
    frontier: &Frontier,
    visit: &mut dyn FnMut(&Graph),
) -> Result<SearchOutcome, SearchError> {
    let start = Instant::now();
    if !c.canonical_filter {
        return Err(SearchError::Checkpoint(
            "resume needs the canonical acceptance filter".into(),
        ));
    }
    if !frontier.matches(c) {
        return Err(SearchError::Checkpoint(
            "checkpoint was written for a different configuration".into(),
        ));
    }
    if !validate(c)? {
        return Err(SearchError::Checkpoint(
            "configuration admits no graphs".into(),
        ));
    }
    let p = params(c);
    let mut units = Vec::new();
    for e in &frontier.entries {
        let g = parse_graph6(&e.graph6).map_err(|err| SearchError::Checkpoint(err.to_string()))?;
        let state = State::from_graph(&p, &g, e.depth).map_err(SearchError::Checkpoint)?;
        units.push(Unit {
            state,
            cursor: e.cursor,
        });
    }
    run_units(
        c,
        &p,
        units,
        frontier.nodes_expanded,
        frontier.per_n.clone(),
        frontier.hits.clone(),
        start,
        visit,
    )
}

/// Splits the generation tree at `split_depth` completion edges.
fn prefix_units(c: &SearchConfig, p: &Params, root: State, out: &mut Vec<Unit>, nodes: &AtomicU64) {
    let mut stack = vec![root];
    let mut ordered = Vec::new();
    while let Some(s) = stack.pop() {
        if s.depth >= c.split_depth {
            ordered.push(s);
            continue;
        }
        nodes.fetch_add(1, Ordering::Relaxed);
        match s.step(p) {
            Step::Leaf => ordered.push(s),
            Step::Children(ch) => stack.extend(ch.into_iter().rev()),
        }
    }
    out.extend(
        ordered
            .into_iter()
            .enumerate()
            .map(|(cursor, state)| Unit { state, cursor }),
    );
}

enum UnitResult {
    Done(Vec<Found>),
    /// Leaves found so far and the unexplored remainder, next state last.
    Aborted(Vec<Found>, Vec<State>),
}

fn explore(
    p: &Params,
    c: &SearchConfig,
    root: &State,
    nodes: &AtomicU64,
    limit: Option<u64>,
) -> Result<UnitResult, SearchError> {
    let mut found = Vec::new();
    let mut stack = vec![root.clone()];
    while let Some(s) = stack.pop() {
        let used = nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if limit.is_some_and(|l| used > l) {
            stack.push(s);
            return Ok(UnitResult::Aborted(found, stack));
        }
        match s.step(p) {
            Step::Leaf => {
                if let Some(f) = on_leaf(c, p, &s)? {
                    found.push(f);
                }
            }
            Step::Children(ch) => stack.extend(ch.into_iter().rev()),
        }
    }
    Ok(UnitResult::Done(found))
}

fn on_leaf(c: &SearchConfig, p: &Params, s: &State) -> Result<Option<Found>, SearchError> {
    let counts = &s.counts[..s.n];
    // The root carries the largest count, so it is zero only when the
    // girth exceeds g.
    if c.girth_mode == GirthMode::Exactly && counts[0] == 0 {
        return Ok(None);
    }
    let leaf = s.graph();
    let canon = if c.canonical_filter {
        match accept::accept(p, &leaf, counts) {
            Some(g) => g,
            None => return Ok(None),
        }
    } else {
        accept::canonical(&leaf, counts)
    };
    let hit = c
        .lambda_filter
        .map_or(true, |l| counts.iter().all(|&x| x == l));
    Ok(Some(Found {
        n: s.n,
        graph6: write_graph6(&canon),
        canon,
        hit,
    }))
}

#[allow(clippy::too_many_arguments)]
fn run_units(
    c: &SearchConfig,
    p: &Params,
    mut units: Vec<Unit>,
    prior_nodes: u64,
    mut per_n: BTreeMap<usize, NCounts>,
    mut hits: Vec<String>,
    start: Instant,
    visit: &mut dyn FnMut(&Graph),
) -> Result<SearchOutcome, SearchError> {
    units.shuffle(&mut ChaCha8Rng::seed_from_u64(c.seed));
    let nodes = AtomicU64::new(prior_nodes);
    // The budget applies to this invocation only.
    let limit = c.node_budget.map(|b| prior_nodes.saturating_add(b));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(c.workers)
        .build()
        .map_err(|e| SearchError::Internal(e.to_string()))?;
    let results: Vec<Result<UnitResult, SearchError>> = pool.install(|| {
        units
            .par_iter()
            .map(|u| explore(p, c, &u.state, &nodes, limit))
            .collect()
    });

    let mut found = Vec::new();
    let mut pending = Vec::new();
    for (u, r) in units.iter().zip(results) {
        match r? {
            UnitResult::Done(f) => found.extend(f),
            UnitResult::Aborted(f, rest) => {
                found.extend(f);
                pending.extend(rest.iter().rev().map(|s| FrontierEntry {
                    graph6: write_graph6(&s.graph()),
                    depth: s.depth,
                    cursor: u.cursor,
                }));
            }
        }
    }
    found.sort_by(|a, b| (a.n, &a.graph6).cmp(&(b.n, &b.graph6)));
    let before = found.len();
    found.dedup_by(|a, b| a.graph6 == b.graph6);
    if c.canonical_filter && found.len() != before {
        return Err(SearchError::Internal(format!(
            "canonical acceptance produced {} duplicate classes",
            before - found.len()
        )));
    }
    let mut seen: BTreeSet<String> = hits.iter().cloned().collect();
    for f in &found {
        let e = per_n.entry(f.n).or_default();
        e.enumerated += 1;
        if f.hit {
            e.hits += 1;
            if !seen.insert(f.graph6.clone()) {
                return Err(SearchError::Internal(format!(
                    "class {} found twice",
                    f.graph6
                )));
            }
            hits.push(f.graph6.clone());
        }
        visit(&f.canon);
    }
    hits.sort_by(|a, b| {
        let n = |s: &String| parse_graph6(s).map(|g| g.n()).unwrap_or(0);
        (n(a), a).cmp(&(n(b), b))
    });

    let mut out = SearchOutcome::empty(c);
    out.per_n = per_n;
    out.hits = hits;
    out.nodes_expanded = nodes.into_inner();
    if !pending.is_empty() {
        pending.sort_by_key(|e| e.cursor);
        out.status = SearchStatus::Suspended;
        out.frontier = Some(Frontier {
            k: c.k,
            g: c.g,
            n_max: c.n_max,
            girth_mode: c.girth_mode,
            lambda_filter: c.lambda_filter,
            lambda_pruning: c.lambda_pruning,
            split_depth: c.split_depth,
            nodes_expanded: out.nodes_expanded,
            per_n: out.per_n.clone(),
            hits: out.hits.clone(),
            entries: pending,
        });
    }
    out.wall_time = start.elapsed();
    Ok(out)
}

/// Runs a search collecting the canonical form of every enumerated class.
pub fn enumerate(c: &SearchConfig) -> Result<(SearchOutcome, Vec<Graph>), SearchError> {
    let mut all = Vec::new();
    let out = generate(c, &mut |g| all.push(g.clone()))?;
    Ok((out, all))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfirmOutcome {
    pub k: usize,
    pub two_epsilon: u64,
    pub lambda: u64,
    pub outcome: SearchOutcome,
    /// graph6 witnesses of vgr graphs the theorem forbids; always empty
    /// unless an engine is broken.
    pub contradictions: Vec<String>,
}

/// Search configuration for the girth-5 non-existence check with
/// `λ = (k(k-1)² - 2ε) / 2`, and that λ.
pub fn confirm_config(
    k: usize,
    two_epsilon: u64,
    n_max: usize,
) -> Result<(SearchConfig, u64), SearchError> {
    if k < 3 {
        return Err(SearchError::Range(format!("need k >= 3 (got {k})")));
    }
    if two_epsilon == 0 || two_epsilon > k as u64 - 1 {
        return Err(SearchError::Range(format!(
            "2ε must lie in 1..={} (got {two_epsilon})",
            k - 1
        )));
    }
    let two_bound = two_vertex_bound(k as u64, 5).map_err(|e| SearchError::Range(e.to_string()))?;
    let twice = two_bound - two_epsilon;
    if twice % 2 == 1 {
        return Err(SearchError::Range(format!(
            "λ = {twice}/2 is not an integer"
        )));
    }
    let lambda = twice / 2;
    let mut c = SearchConfig::new(k, 5, n_max);
    c.girth_mode = GirthMode::Exactly;
    c.lambda_filter = Some(lambda);
    Ok((c, lambda))
}

/// Exhaustively checks that no connected girth-5 `k`-regular graph on at
/// most `n_max` vertices is vertex-girth-regular with
/// `λ = (k(k-1)² - 2ε) / 2`.
pub fn confirm_nonexistence(
    k: usize,
    two_epsilon: u64,
    n_max: usize,
    workers: usize,
) -> Result<ConfirmOutcome, SearchError> {
    let (mut c, lambda) = confirm_config(k, two_epsilon, n_max)?;
    c.workers = workers;
    let outcome = generate(&c, &mut |_| {})?;
    Ok(ConfirmOutcome {
        k,
        two_epsilon,
        lambda,
        contradictions: outcome.hits.clone(),
        outcome,
    })
}

/// All `vgr(n, k, g, λ)` classes with `n ≤ n_max`.
pub fn find_vgr(
    k: usize,
    g: usize,
    lambda: u64,
    n_max: usize,
    workers: usize,
) -> Result<SearchOutcome, SearchError> {
    let bound =
        two_vertex_bound(k as u64, g as u64).map_err(|e| SearchError::Range(e.to_string()))?;
    if 2 * lambda > bound {
        return Err(SearchError::Range(format!(
            "λ={lambda} exceeds the per-vertex bound {}",
            crate::classify::Halves(bound as i64)
        )));
    }
    let mut c = SearchConfig::new(k, g, n_max);
    c.girth_mode = GirthMode::Exactly;
    c.lambda_filter = Some(lambda);
    c.lambda_pruning = true;
    c.workers = workers;
    generate(&c, &mut |_| {})
}
