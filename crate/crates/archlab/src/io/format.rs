//! Parser and canonical serializer for architecture files.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::archgraph::{CyclicGraph, Edge, GraphBuildError, NodeId, NodeKind};

use super::{ArchFile, EdgeDecl, NodeDecl};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnsupportedVersion(i64),
    DuplicateNode(String),
    DuplicateEdge(String),
    UnknownNodeReference(String),
    /// The delay must be a plain integer; `1.5` and friends land here.
    InvalidSigma(String),
    Structural(GraphBuildError),
    Json(String),
}

/// A diagnostic with a 1-based line and column (0 when the error concerns
/// the whole input, as with the JSON form).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "{}:{}: ", self.line, self.column)?;
        }
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "{msg}"),
            ParseErrorKind::UnsupportedVersion(v) => write!(f, "unsupported version {v}"),
            ParseErrorKind::DuplicateNode(id) => write!(f, "duplicate node {id}"),
            ParseErrorKind::DuplicateEdge(e) => write!(f, "duplicate edge {e}"),
            ParseErrorKind::UnknownNodeReference(id) => {
                write!(f, "edge references undeclared node {id}")
            }
            ParseErrorKind::InvalidSigma(s) => {
                write!(f, "delay must be an integer, got {s:?}")
            }
            ParseErrorKind::Structural(e) => write!(f, "{e}"),
            ParseErrorKind::Json(msg) => write!(f, "invalid JSON form: {msg}"),
        }
    }
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

/// Parses the text format, or the JSON mirror when the input starts with
/// `{`. Returns a structurally well-formed graph; run `validate` separately
/// for the semantic conditions.
pub fn parse(bytes: &[u8]) -> Result<CyclicGraph, ParseError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| err(0, 0, ParseErrorKind::Syntax(format!("invalid UTF-8: {e}"))))?;
    if text.trim_start().starts_with('{') {
        let file: ArchFile = serde_json::from_str(text)
            .map_err(|e| err(0, 0, ParseErrorKind::Json(e.to_string())))?;
        return graph_from_file(&file);
    }
    parse_text(text)
}

/// Serializes in canonical form: byte-stable across runs and platforms,
/// identical for structurally equal graphs.
pub fn serialize(graph: &CyclicGraph) -> Vec<u8> {
    let mut out = String::new();
    out.push_str("version 1\n");
    out.push_str(&format!("period {}\n", graph.period()));
    for (id, kind) in graph.nodes() {
        out.push_str(&format!(
            "node {} {} {}\n",
            kind.as_str(),
            id.time_index,
            id.label
        ));
    }
    for e in graph.edges() {
        out.push_str(&format!(
            "edge {}@{} -> {}@{} : {}\n",
            e.from.label, e.from.time_index, e.to.label, e.to.time_index, e.sigma
        ));
    }
    out.into_bytes()
}

/// Tokens with their 1-based column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_integer(s: &str, line: usize, column: usize) -> Result<i64, ParseError> {
    s.parse::<i64>()
        .map_err(|_| err(line, column, ParseErrorKind::InvalidSigma(s.to_string())))
}

/// Parses an `id@time` node reference.
fn parse_node_ref(s: &str, line: usize, column: usize) -> Result<NodeId, ParseError> {
    let syntax = |msg: String| err(line, column, ParseErrorKind::Syntax(msg));
    let (label, time) = s
        .split_once('@')
        .ok_or_else(|| syntax(format!("expected id@time, got {s:?}")))?;
    if !is_identifier(label) {
        return Err(syntax(format!("invalid identifier {label:?}")));
    }
    let time = time
        .parse::<i64>()
        .map_err(|_| syntax(format!("invalid time index in {s:?}")))?;
    Ok(NodeId::new(label, time))
}

fn parse_text(text: &str) -> Result<CyclicGraph, ParseError> {
    let mut version: Option<i64> = None;
    let mut period: Option<(i64, usize)> = None;
    let mut nodes: Vec<(NodeId, NodeKind)> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut node_set: HashSet<NodeId> = HashSet::new();
    let mut edge_set: HashSet<(NodeId, NodeId, i64)> = HashSet::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        let (col0, keyword) = toks[0];
        let expect = |n: usize| -> Result<(), ParseError> {
            if toks.len() != n {
                Err(err(
                    lineno,
                    col0,
                    ParseErrorKind::Syntax(format!(
                        "expected {} fields on a {keyword} line, got {}",
                        n,
                        toks.len()
                    )),
                ))
            } else {
                Ok(())
            }
        };
        match keyword {
            "version" => {
                expect(2)?;
                let v = parse_integer(toks[1].1, lineno, toks[1].0)?;
                if v != 1 {
                    return Err(err(lineno, toks[1].0, ParseErrorKind::UnsupportedVersion(v)));
                }
                version = Some(v);
            }
            "period" => {
                expect(2)?;
                if version.is_none() {
                    return Err(err(
                        lineno,
                        col0,
                        ParseErrorKind::Syntax("the version line must come first".into()),
                    ));
                }
                period = Some((parse_integer(toks[1].1, lineno, toks[1].0)?, lineno));
            }
            "node" => {
                expect(4)?;
                if period.is_none() {
                    return Err(err(
                        lineno,
                        col0,
                        ParseErrorKind::Syntax("node lines must follow the period line".into()),
                    ));
                }
                let kind = match toks[1].1 {
                    "input" => NodeKind::Input,
                    "hidden" => NodeKind::Hidden,
                    "output" => NodeKind::Output,
                    other => {
                        return Err(err(
                            lineno,
                            toks[1].0,
                            ParseErrorKind::Syntax(format!(
                                "unknown node kind {other:?} (expected input, hidden or output)"
                            )),
                        ))
                    }
                };
                let time = parse_integer(toks[2].1, lineno, toks[2].0).map_err(|mut e| {
                    e.kind = ParseErrorKind::Syntax(format!(
                        "invalid time index {:?}",
                        toks[2].1
                    ));
                    e
                })?;
                let label = toks[3].1;
                if !is_identifier(label) {
                    return Err(err(
                        lineno,
                        toks[3].0,
                        ParseErrorKind::Syntax(format!("invalid identifier {label:?}")),
                    ));
                }
                let id = NodeId::new(label, time);
                if !node_set.insert(id.clone()) {
                    return Err(err(
                        lineno,
                        toks[3].0,
                        ParseErrorKind::DuplicateNode(id.to_string()),
                    ));
                }
                nodes.push((id, kind));
            }
            "edge" => {
                // edge <id>@<i> -> <id>@<i'> : <sigma>
                expect(6)?;
                if toks[2].1 != "->" || toks[4].1 != ":" {
                    return Err(err(
                        lineno,
                        col0,
                        ParseErrorKind::Syntax(
                            "expected `edge from@t -> to@t : sigma`".into(),
                        ),
                    ));
                }
                let from = parse_node_ref(toks[1].1, lineno, toks[1].0)?;
                let to = parse_node_ref(toks[3].1, lineno, toks[3].0)?;
                let sigma = parse_integer(toks[5].1, lineno, toks[5].0)?;
                for endpoint in [&from, &to] {
                    if !node_set.contains(endpoint) {
                        return Err(err(
                            lineno,
                            toks[1].0,
                            ParseErrorKind::UnknownNodeReference(endpoint.to_string()),
                        ));
                    }
                }
                let edge = Edge::new(from, to, sigma);
                if !edge_set.insert((edge.from.clone(), edge.to.clone(), edge.sigma)) {
                    return Err(err(
                        lineno,
                        col0,
                        ParseErrorKind::DuplicateEdge(edge.to_string()),
                    ));
                }
                edges.push(edge);
            }
            other => {
                return Err(err(
                    lineno,
                    col0,
                    ParseErrorKind::Syntax(format!("unknown directive {other:?}")),
                ));
            }
        }
    }

    if version.is_none() {
        return Err(err(0, 0, ParseErrorKind::Syntax("missing version line".into())));
    }
    let Some((period, period_line)) = period else {
        return Err(err(0, 0, ParseErrorKind::Syntax("missing period line".into())));
    };
    CyclicGraph::new(period, nodes, edges)
        .map_err(|e| err(period_line, 1, ParseErrorKind::Structural(e)))
}

fn graph_from_file(file: &ArchFile) -> Result<CyclicGraph, ParseError> {
    let fail = |kind: ParseErrorKind| err(0, 0, kind);
    if file.version != 1 {
        return Err(fail(ParseErrorKind::UnsupportedVersion(file.version)));
    }
    let mut nodes = Vec::new();
    let mut node_set = HashSet::new();
    for NodeDecl {
        id,
        kind,
        time_index,
    } in &file.nodes
    {
        if !is_identifier(id) {
            return Err(fail(ParseErrorKind::Syntax(format!(
                "invalid identifier {id:?}"
            ))));
        }
        let kind = match kind.as_str() {
            "input" => NodeKind::Input,
            "hidden" => NodeKind::Hidden,
            "output" => NodeKind::Output,
            other => {
                return Err(fail(ParseErrorKind::Syntax(format!(
                    "unknown node kind {other:?}"
                ))))
            }
        };
        let node = NodeId::new(id.clone(), *time_index);
        if !node_set.insert(node.clone()) {
            return Err(fail(ParseErrorKind::DuplicateNode(node.to_string())));
        }
        nodes.push((node, kind));
    }
    let mut edges = Vec::new();
    let mut edge_set = HashSet::new();
    for EdgeDecl { from, to, sigma } in &file.edges {
        let from = parse_node_ref(from, 0, 0)?;
        let to = parse_node_ref(to, 0, 0)?;
        for endpoint in [&from, &to] {
            if !node_set.contains(endpoint) {
                return Err(fail(ParseErrorKind::UnknownNodeReference(
                    endpoint.to_string(),
                )));
            }
        }
        let edge = Edge::new(from, to, *sigma);
        if !edge_set.insert((edge.from.clone(), edge.to.clone(), edge.sigma)) {
            return Err(fail(ParseErrorKind::DuplicateEdge(edge.to_string())));
        }
        edges.push(edge);
    }
    CyclicGraph::new(file.period, nodes, edges)
        .map_err(|e| fail(ParseErrorKind::Structural(e)))
}
