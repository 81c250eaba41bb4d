//! Girth-cycle counting, regularity classification, proof auditing and
//! isomorph-free search for regular graphs.

pub mod audit;
pub mod bitset;
pub mod canon;
pub mod classify;
pub mod cli;
pub mod format;
pub mod girth;
pub mod graph;
pub mod report;
pub mod search;

pub use bitset::VertexSet;
pub use graph::{named_graph, Graph, NamedGraphId};
