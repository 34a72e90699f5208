//! Architecture files and DOT export.
//!
//! The canonical on-disk form is a line-oriented UTF-8 text format:
//!
//! ```text
//! # comments start with '#'
//! version 1
//! period 1
//! node input 0 x
//! node hidden 0 h
//! node output 0 y
//! edge x@0 -> h@0 : 0
//! edge h@0 -> h@0 : 1
//! edge h@0 -> y@0 : 0
//! ```
//!
//! Nodes are sorted by `(time_index, id)` and edges by `(from, to, sigma)`,
//! newlines are LF, and identifiers match `[A-Za-z_][A-Za-z0-9_]*`, so
//! serialization is byte-stable and `parse . serialize` is the identity on
//! canonical files. A JSON mirror of the same schema is accepted on input
//! when the file starts with `{`.
//!
//! Parsing checks structure only (syntax, references, duplicates); semantic
//! validity is a separate step.

mod dot;
mod format;

pub use dot::export_dot;
pub use format::{parse, serialize, ParseError, ParseErrorKind};

use serde::{Deserialize, Serialize};

use crate::archgraph::CyclicGraph;

/// Structured mirror of the file schema, used for the JSON form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArchFile {
    pub version: i64,
    pub period: i64,
    pub nodes: Vec<NodeDecl>,
    pub edges: Vec<EdgeDecl>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeDecl {
    pub id: String,
    pub kind: String,
    pub time_index: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDecl {
    /// `id@time` reference, mirroring the text form.
    pub from: String,
    pub to: String,
    pub sigma: i64,
}

impl ArchFile {
    /// Canonical description of a graph (version 1).
    pub fn from_graph(graph: &CyclicGraph) -> ArchFile {
        ArchFile {
            version: 1,
            period: graph.period(),
            nodes: graph
                .nodes()
                .iter()
                .map(|(id, kind)| NodeDecl {
                    id: id.label.clone(),
                    kind: kind.as_str().to_string(),
                    time_index: id.time_index,
                })
                .collect(),
            edges: graph
                .edges()
                .iter()
                .map(|e| EdgeDecl {
                    from: format!("{}@{}", e.from.label, e.from.time_index),
                    to: format!("{}@{}", e.to.label, e.to.time_index),
                    sigma: e.sigma,
                })
                .collect(),
        }
    }
}
