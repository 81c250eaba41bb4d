//! Canonical labelling by individualization and equitable refinement.

use std::collections::VecDeque;

use crate::bitset::VertexSet;
use crate::graph::Graph;

/// A canonical relabelling: `labelling[v]` is the canonical index of `v`,
/// and `graph` is the relabelled graph. Isomorphic inputs (with matching
/// colours) yield identical `graph`s.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub labelling: Vec<usize>,
    pub graph: Graph,
    /// Number of automorphism generators found along the way.
    pub generators: usize,
}

/// Ordered partition of the vertex set.
#[derive(Clone)]
struct Partition {
    lab: Vec<usize>,
    /// Start position of the cell containing each vertex.
    cell_of: Vec<usize>,
    /// Cell length, indexed by start position; zero elsewhere.
    len: Vec<usize>,
}

impl Partition {
    fn from_colours(colours: &[u64]) -> (Partition, Vec<usize>) {
        let n = colours.len();
        let mut lab: Vec<usize> = (0..n).collect();
        lab.sort_by_key(|&v| (colours[v], v));
        let mut p = Partition {
            lab,
            cell_of: vec![0; n],
            len: vec![0; n],
        };
        let mut starts = Vec::new();
        let mut i = 0;
        while i < n {
            let mut j = i;
            while j < n && colours[p.lab[j]] == colours[p.lab[i]] {
                p.cell_of[p.lab[j]] = i;
                j += 1;
            }
            p.len[i] = j - i;
            starts.push(i);
            i = j;
        }
        (p, starts)
    }

    #[cfg(test)]
    fn is_discrete(&self) -> bool {
        self.target_cell().is_none()
    }

    fn target_cell(&self) -> Option<usize> {
        let mut i = 0;
        while i < self.lab.len() {
            if self.len[i] > 1 {
                return Some(i);
            }
            i += self.len[i];
        }
        None
    }

    fn cell_set(&self, start: usize) -> VertexSet {
        self.lab[start..start + self.len[start]]
            .iter()
            .copied()
            .collect()
    }

    /// Refines to the coarsest equitable partition finer than `self`,
    /// starting from the given splitter cells.
    fn refine(&mut self, rows: &[VertexSet], splitters: &[usize]) {
        let n = self.lab.len();
        let mut queued = vec![false; n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in splitters {
            if !queued[s] {
                queued[s] = true;
                queue.push_back(s);
            }
        }
        let mut counts = vec![0u32; n];
        let mut keyed: Vec<(u32, usize)> = Vec::with_capacity(n);
        while let Some(s) = queue.pop_front() {
            queued[s] = false;
            let w = self.cell_set(s);
            let mut c = 0;
            while c < n {
                let l = self.len[c];
                if l > 1 {
                    let mut same = true;
                    for i in c..c + l {
                        let v = self.lab[i];
                        counts[v] = (rows[v] & w).len() as u32;
                        if counts[v] != counts[self.lab[c]] {
                            same = false;
                        }
                    }
                    if !same {
                        keyed.clear();
                        keyed.extend(self.lab[c..c + l].iter().map(|&v| (counts[v], v)));
                        keyed.sort_unstable();
                        let mut start = c;
                        for (i, &(cnt, v)) in keyed.iter().enumerate() {
                            let pos = c + i;
                            if i > 0 && cnt != keyed[i - 1].0 {
                                self.len[start] = pos - start;
                                start = pos;
                            }
                            self.lab[pos] = v;
                            self.cell_of[v] = start;
                        }
                        self.len[start] = c + l - start;
                        let mut f = c;
                        while f < c + l {
                            if !queued[f] {
                                queued[f] = true;
                                queue.push_back(f);
                            }
                            f += self.len[f];
                        }
                    }
                }
                c += l;
            }
        }
    }

    /// Moves `v` to a singleton cell at the front of its cell and refines.
    fn individualize(&self, rows: &[VertexSet], v: usize) -> Partition {
        let mut p = self.clone();
        let s = p.cell_of[v];
        let l = p.len[s];
        let pos = p.lab[s..s + l].iter().position(|&x| x == v).unwrap() + s;
        p.lab.swap(s, pos);
        p.len[s] = 1;
        p.len[s + 1] = l - 1;
        for i in s + 1..s + l {
            p.cell_of[p.lab[i]] = s + 1;
        }
        p.refine(rows, &[s]);
        p
    }
}

struct Searcher<'a> {
    rows: &'a [VertexSet],
    n: usize,
    first: Option<(Vec<usize>, Vec<VertexSet>)>,
    best: Option<(Vec<usize>, Vec<VertexSet>)>,
    /// Path of individualized vertices leading to the first and best leaf.
    first_path: Vec<usize>,
    best_path: Vec<usize>,
    generators: Vec<Vec<usize>>,
}

fn relabelled_rows(rows: &[VertexSet], lab: &[usize]) -> Vec<VertexSet> {
    let mut pos = vec![0; lab.len()];
    for (i, &v) in lab.iter().enumerate() {
        pos[v] = i;
    }
    lab.iter()
        .map(|&v| rows[v].iter().map(|u| pos[u]).collect())
        .collect()
}

fn find(uf: &mut [usize], mut x: usize) -> usize {
    while uf[x] != x {
        uf[x] = uf[uf[x]];
        x = uf[x];
    }
    x
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Searcher<'_> {
    fn orbits_fixing(&self, prefix: &[usize]) -> Vec<usize> {
        let mut uf: Vec<usize> = (0..self.n).collect();
        for gen in &self.generators {
            if prefix.iter().all(|&v| gen[v] == v) {
                for v in 0..self.n {
                    let (a, b) = (find(&mut uf, v), find(&mut uf, gen[v]));
                    if a != b {
                        uf[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        uf
    }

    /// Explores the subtree under `p`. Returns a level to jump back to
    /// after an automorphism shows the remaining subtree is redundant.
    fn search(&mut self, p: &Partition, path: &mut Vec<usize>) -> Option<usize> {
        let Some(t) = p.target_cell() else {
            return self.leaf(&p.lab, path);
        };
        let mut cell: Vec<usize> = p.lab[t..t + p.len[t]].to_vec();
        cell.sort_unstable();
        let mut tried: Vec<usize> = Vec::new();
        for &w in &cell {
            if !tried.is_empty() {
                let mut uf = self.orbits_fixing(path);
                let rw = find(&mut uf, w);
                if tried.iter().any(|&x| find(&mut uf, x) == rw) {
                    continue;
                }
            }
            tried.push(w);
            let child = p.individualize(self.rows, w);
            path.push(w);
            let jump = self.search(&child, path);
            path.pop();
            if let Some(level) = jump {
                if level < path.len() {
                    return Some(level);
                }
            }
        }
        None
    }

    fn leaf(&mut self, lab: &[usize], path: &[usize]) -> Option<usize> {
        let rows = relabelled_rows(self.rows, lab);
        let Some((first_lab, first_rows)) = &self.first else {
            self.first = Some((lab.to_vec(), rows.clone()));
            self.best = Some((lab.to_vec(), rows));
            self.first_path = path.to_vec();
            self.best_path = path.to_vec();
            return None;
        };
        if rows == *first_rows {
            let gen = self.automorphism(first_lab, lab);
            self.generators.push(gen);
            return Some(common_prefix(path, &self.first_path));
        }
        let (best_lab, best_rows) = self.best.as_ref().unwrap();
        match rows.cmp(best_rows) {
            std::cmp::Ordering::Equal => {
                let gen = self.automorphism(best_lab, lab);
                self.generators.push(gen);
                Some(common_prefix(path, &self.best_path))
            }
            std::cmp::Ordering::Less => {
                self.best = Some((lab.to_vec(), rows));
                self.best_path = path.to_vec();
                None
            }
            std::cmp::Ordering::Greater => None,
        }
    }

    /// The automorphism sending the vertex at each position of `lab` to the
    /// vertex at the same position of `target`.
    fn automorphism(&self, target: &[usize], lab: &[usize]) -> Vec<usize> {
        let mut gen = vec![0; self.n];
        for (i, &v) in lab.iter().enumerate() {
            gen[v] = target[i];
        }
        gen
    }
}

/// Canonical form of an uncoloured graph.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    canonical_form_coloured(g, &vec![0; g.n()])
}

/// Canonical form respecting a vertex colouring. Cells are ordered by
/// colour, so vertices of the smallest colour receive the smallest labels.
pub fn canonical_form_coloured(g: &Graph, colours: &[u64]) -> CanonicalForm {
    assert_eq!(colours.len(), g.n(), "one colour per vertex");
    let n = g.n();
    if n == 0 {
        return CanonicalForm {
            labelling: Vec::new(),
            graph: g.clone(),
            generators: 0,
        };
    }
    let rows = g.rows();
    let (mut p, starts) = Partition::from_colours(colours);
    p.refine(rows, &starts);
    let mut s = Searcher {
        rows,
        n,
        first: None,
        best: None,
        first_path: Vec::new(),
        best_path: Vec::new(),
        generators: Vec::new(),
    };
    s.search(&p, &mut Vec::new());
    let (lab, best_rows) = s.best.unwrap();
    let mut labelling = vec![0; n];
    for (i, &v) in lab.iter().enumerate() {
        labelling[v] = i;
    }
    CanonicalForm {
        labelling,
        graph: Graph::from_rows_unchecked(best_rows),
        generators: s.generators.len(),
    }
}

/// The first cell of the coarsest equitable partition of the colouring.
/// Canonical index 0 always lies in it.
pub fn leading_cell(g: &Graph, colours: &[u64]) -> VertexSet {
    let (mut p, starts) = Partition::from_colours(colours);
    p.refine(g.rows(), &starts);
    if p.lab.is_empty() {
        return VertexSet::empty();
    }
    p.cell_set(0)
}

#[cfg(test)]
fn equitable_is_discrete(g: &Graph) -> bool {
    let (mut p, starts) = Partition::from_colours(&vec![0; g.n()]);
    p.refine(g.rows(), &starts);
    p.is_discrete()
}
