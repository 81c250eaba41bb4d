//! Machine-readable reports. Field order in these structs is the JSON key
//! order, so output is byte-stable for identical inputs.

use serde::Serialize;

use crate::audit::AuditReport;
use crate::classify::{BoundCheck, ClassificationReport, NonexistenceVerdict};
use crate::search::SearchOutcome;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exit {
    Ok = 0,
    /// A forged-λ audit failure or a theorem contradiction.
    Finding = 1,
    Input = 2,
    Internal = 3,
    Suspended = 4,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub entries: Vec<Entry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<NonexistenceVerdict>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: Vec<String>, timestamps: bool) -> Report {
        let timestamp = timestamps.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Report {
            tool_version: TOOL_VERSION,
            command,
            timestamp,
            entries: Vec::new(),
            search: None,
            verdict: None,
            summary: Summary::default(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// One input graph.
#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    /// Input line, or 0 for named graphs and search hits.
    pub line: usize,
    pub graph6: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_checks: Option<Vec<BoundCheck>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditReport>,
    /// Why the graph was not classified or audited.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Entry {
    pub fn new(line: usize, graph6: String) -> Entry {
        Entry {
            line,
            graph6,
            classification: None,
            bound_checks: None,
            audit: None,
            error: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchSection {
    pub outcome: SearchOutcome,
    /// Set for non-existence runs given `2ε`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_epsilon: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contradictions: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoint: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub graphs: usize,
    pub errors: usize,
    pub vgr: usize,
    pub bound_failures: usize,
    pub audited: usize,
    pub identity_failures: usize,
    pub exit_code: i32,
}

/// Per-vertex table: `graph,vertex,lambda,signature`.
pub fn per_vertex_csv(rows: &[(usize, String, Vec<u64>, Vec<String>)]) -> String {
    let mut s = String::from("entry,graph6,vertex,lambda,signature\n");
    for (entry, g6, lambdas, sigs) in rows {
        for (v, (l, sig)) in lambdas.iter().zip(sigs).enumerate() {
            s.push_str(&format!("{entry},{g6},{v},{l},{sig}\n"));
        }
    }
    s
}
