//! Checkpoint files for suspended searches.
//!
//! ```text
//! # girthlab-frontier 1
//! # config k=3 g=5 n_max=20 girth_mode=exactly lambda=- lambda_pruning=0 split_depth=4
//! # nodes 1000000
//! # count 12 2 2
//! # hit K?????...
//! <graph6> <depth> <cursor>
//! ```
//!
//! Each body line is an unexplored subtree root: the partial graph, the
//! number of completion edges it carries, and its index in the original
//! prefix order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{GirthMode, NCounts, SearchConfig, SearchError};

const MAGIC: &str = "# girthlab-frontier 1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontierEntry {
    pub graph6: String,
    pub depth: usize,
    pub cursor: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frontier {
    pub k: usize,
    pub g: usize,
    pub n_max: usize,
    pub girth_mode: GirthMode,
    pub lambda_filter: Option<u64>,
    pub lambda_pruning: bool,
    pub split_depth: usize,
    pub nodes_expanded: u64,
    pub per_n: BTreeMap<usize, NCounts>,
    pub hits: Vec<String>,
    pub entries: Vec<FrontierEntry>,
}

impl Frontier {
    pub fn matches(&self, c: &SearchConfig) -> bool {
        self.k == c.k
            && self.g == c.g
            && self.n_max == c.n_max
            && self.girth_mode == c.girth_mode
            && self.lambda_filter == c.lambda_filter
            && self.lambda_pruning == c.lambda_pruning
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let lambda = self
            .lambda_filter
            .map_or("-".to_string(), |l| l.to_string());
        let _ = writeln!(s, "{MAGIC}");
        let _ = writeln!(
            s,
            "# config k={} g={} n_max={} girth_mode={} lambda={} lambda_pruning={} split_depth={}",
            self.k,
            self.g,
            self.n_max,
            self.girth_mode.as_str(),
            lambda,
            self.lambda_pruning as u8,
            self.split_depth
        );
        let _ = writeln!(s, "# nodes {}", self.nodes_expanded);
        for (n, c) in &self.per_n {
            let _ = writeln!(s, "# count {n} {} {}", c.enumerated, c.hits);
        }
        for h in &self.hits {
            let _ = writeln!(s, "# hit {h}");
        }
        for e in &self.entries {
            let _ = writeln!(s, "{} {} {}", e.graph6, e.depth, e.cursor);
        }
        s
    }

    pub fn parse(text: &str) -> Result<Frontier, SearchError> {
        let bad = |line: usize, msg: &str| SearchError::Checkpoint(format!("line {line}: {msg}"));
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        match lines.next() {
            Some((_, l)) if l.trim() == MAGIC => {}
            _ => return Err(bad(1, "missing frontier header")),
        }
        let mut f = Frontier {
            k: 0,
            g: 0,
            n_max: 0,
            girth_mode: GirthMode::AtLeast,
            lambda_filter: None,
            lambda_pruning: false,
            split_depth: 0,
            nodes_expanded: 0,
            per_n: BTreeMap::new(),
            hits: Vec::new(),
            entries: Vec::new(),
        };
        let mut have_config = false;
        for (no, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("# config ") {
                for kv in rest.split_whitespace() {
                    let (key, val) = kv
                        .split_once('=')
                        .ok_or_else(|| bad(no, "malformed config"))?;
                    let num = || {
                        val.parse::<usize>()
                            .map_err(|_| bad(no, "malformed number"))
                    };
                    match key {
                        "k" => f.k = num()?,
                        "g" => f.g = num()?,
                        "n_max" => f.n_max = num()?,
                        "split_depth" => f.split_depth = num()?,
                        "lambda_pruning" => f.lambda_pruning = num()? == 1,
                        "girth_mode" => {
                            f.girth_mode = GirthMode::parse(val)
                                .ok_or_else(|| bad(no, "unknown girth mode"))?
                        }
                        "lambda" => {
                            f.lambda_filter = if val == "-" {
                                None
                            } else {
                                Some(val.parse().map_err(|_| bad(no, "malformed lambda"))?)
                            }
                        }
                        _ => return Err(bad(no, "unknown config key")),
                    }
                }
                have_config = true;
            } else if let Some(rest) = line.strip_prefix("# nodes ") {
                f.nodes_expanded = rest
                    .trim()
                    .parse()
                    .map_err(|_| bad(no, "malformed node count"))?;
            } else if let Some(rest) = line.strip_prefix("# count ") {
                let nums: Vec<u64> = rest
                    .split_whitespace()
                    .map(|x| x.parse::<u64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad(no, "malformed count"))?;
                if nums.len() != 3 {
                    return Err(bad(no, "count needs n, enumerated, hits"));
                }
                f.per_n.insert(
                    nums[0] as usize,
                    NCounts {
                        enumerated: nums[1],
                        hits: nums[2],
                    },
                );
            } else if let Some(rest) = line.strip_prefix("# hit ") {
                f.hits.push(rest.trim().to_string());
            } else if line.starts_with('#') {
                continue;
            } else {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(bad(no, "expected `graph6 depth cursor`"));
                }
                f.entries.push(FrontierEntry {
                    graph6: parts[0].to_string(),
                    depth: parts[1].parse().map_err(|_| bad(no, "malformed depth"))?,
                    cursor: parts[2].parse().map_err(|_| bad(no, "malformed cursor"))?,
                });
            }
        }
        if !have_config {
            return Err(bad(2, "missing config line"));
        }
        Ok(f)
    }
}
