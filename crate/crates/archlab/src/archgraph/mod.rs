//! Core data model for recurrent-network cyclic graphs.
//!
//! A [`CyclicGraph`] is a finite weighted directed multigraph whose nodes are
//! labelled with a time index `i` in `[0, m)` (where `m` is the declared
//! period) and a symbolic label, and whose edges carry an integer delay
//! `sigma`: the number of time steps the edge crosses once the graph is
//! unfolded. Parallel edges between the same endpoints are allowed as long as
//! their delays differ.
//!
//! Construction enforces structural well-formedness (ids resolve, no
//! duplicates, time indices in range). Semantic validity — the conditions
//! that make unfolding a DAG and the complexity measures well defined — is
//! checked separately by [`CyclicGraph::validate`] and reported as data, not
//! as errors.

mod cycles;
mod scc;
mod validate;

pub use cycles::{CycleBudgetExceeded, DEFAULT_CYCLE_BUDGET};
pub use validate::{ValidationReport, Violation};

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// A node identifier: symbolic label plus time index within one period.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NodeId {
    /// Time index within `[0, period)`. Ordered first so that node ordering
    /// matches the canonical serialization order.
    pub time_index: i64,
    /// Symbolic label drawn from the graph's finite label set.
    pub label: String,
}

impl NodeId {
    pub fn new(label: impl Into<String>, time_index: i64) -> Self {
        NodeId {
            label: label.into(),
            time_index,
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.label, self.time_index)
    }
}

/// Which of the three node classes a node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Input,
    Hidden,
    Output,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Input => "input",
            NodeKind::Hidden => "hidden",
            NodeKind::Output => "output",
        }
    }
}

/// A directed edge with an integer time delay.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub sigma: i64,
}

impl Edge {
    pub fn new(from: NodeId, to: NodeId, sigma: i64) -> Self {
        Edge { from, to, sigma }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} : {}", self.from, self.to, self.sigma)
    }
}

/// A directed cycle visiting no node twice, together with its length and
/// delay sum. Parallel edges yield distinct cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimpleCycle {
    pub edges: Vec<Edge>,
    /// Number of edges.
    pub length: usize,
    /// Sum of the `sigma` delays along the cycle.
    pub sigma_sum: i64,
}

impl SimpleCycle {
    pub(crate) fn from_edges(edges: Vec<Edge>) -> Self {
        let length = edges.len();
        let sigma_sum = edges.iter().map(|e| e.sigma).sum();
        SimpleCycle {
            edges,
            length,
            sigma_sum,
        }
    }
}

impl fmt::Display for SimpleCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in &self.edges {
            if first {
                write!(f, "{}", e.from)?;
                first = false;
            }
            write!(f, " -({})-> {}", e.sigma, e.to)?;
        }
        Ok(())
    }
}

/// Sign classification of a graph's directed cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Every simple cycle has a strictly positive delay sum.
    Positive,
    /// Every simple cycle has a strictly negative delay sum.
    Negative,
    /// Cycles of both signs exist.
    Bidirectional,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Orientation::Positive => "positive",
            Orientation::Negative => "negative",
            Orientation::Bidirectional => "bidirectional",
        };
        f.write_str(s)
    }
}

/// Structural construction errors. These mean the input does not describe a
/// multigraph at all; semantic violations live in [`ValidationReport`].
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GraphBuildError {
    #[error("period must be positive, got {0}")]
    NonPositivePeriod(i64),
    #[error("node label must be nonempty")]
    EmptyLabel,
    #[error("time index {0} outside [0, {1})")]
    TimeIndexOutOfRange(i64, i64),
    #[error("duplicate node {0}")]
    DuplicateNode(NodeId),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("edge endpoint {0} is not a declared node")]
    UnknownEndpoint(NodeId),
}

/// The cyclic (time-folded) representation of a recurrent architecture.
///
/// Immutable after construction: nodes and edges are held in canonical order
/// (nodes by `(time_index, label)`, edges by `(from, to, sigma)`), so two
/// structurally equal graphs compare equal regardless of input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicGraph {
    period: i64,
    nodes: Vec<(NodeId, NodeKind)>,
    edges: Vec<Edge>,
    index: HashMap<NodeId, usize>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
}

impl CyclicGraph {
    /// Builds a graph from raw parts, enforcing structural invariants.
    pub fn new(
        period: i64,
        mut nodes: Vec<(NodeId, NodeKind)>,
        mut edges: Vec<Edge>,
    ) -> Result<Self, GraphBuildError> {
        if period < 1 {
            return Err(GraphBuildError::NonPositivePeriod(period));
        }
        nodes.sort_by(|a, b| a.0.cmp(&b.0));
        for (id, _) in &nodes {
            if id.label.is_empty() {
                return Err(GraphBuildError::EmptyLabel);
            }
            if id.time_index < 0 || id.time_index >= period {
                return Err(GraphBuildError::TimeIndexOutOfRange(id.time_index, period));
            }
        }
        for pair in nodes.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(GraphBuildError::DuplicateNode(pair[0].0.clone()));
            }
        }
        let index: HashMap<NodeId, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, (id, _))| (id.clone(), i))
            .collect();
        edges.sort();
        for pair in edges.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphBuildError::DuplicateEdge(pair[0].clone()));
            }
        }
        let mut outgoing = vec![Vec::new(); nodes.len()];
        let mut incoming = vec![Vec::new(); nodes.len()];
        for (ei, e) in edges.iter().enumerate() {
            let from = *index
                .get(&e.from)
                .ok_or_else(|| GraphBuildError::UnknownEndpoint(e.from.clone()))?;
            let to = *index
                .get(&e.to)
                .ok_or_else(|| GraphBuildError::UnknownEndpoint(e.to.clone()))?;
            outgoing[from].push(ei);
            incoming[to].push(ei);
        }
        Ok(CyclicGraph {
            period,
            nodes,
            edges,
            index,
            outgoing,
            incoming,
        })
    }

    pub fn period(&self) -> i64 {
        self.period
    }

    /// Nodes in canonical `(time_index, label)` order.
    pub fn nodes(&self) -> &[(NodeId, NodeKind)] {
        &self.nodes
    }

    /// Edges in canonical `(from, to, sigma)` order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_index(&self, id: &NodeId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn node_id(&self, idx: usize) -> &NodeId {
        &self.nodes[idx].0
    }

    pub fn kind(&self, idx: usize) -> NodeKind {
        self.nodes[idx].1
    }

    pub fn kind_of(&self, id: &NodeId) -> Option<NodeKind> {
        self.node_index(id).map(|i| self.kind(i))
    }

    /// Edge indices leaving node `idx`, in canonical edge order.
    pub fn outgoing(&self, idx: usize) -> &[usize] {
        &self.outgoing[idx]
    }

    /// Edge indices entering node `idx`, in canonical edge order.
    pub fn incoming(&self, idx: usize) -> &[usize] {
        &self.incoming[idx]
    }

    pub fn edge(&self, ei: usize) -> &Edge {
        &self.edges[ei]
    }

    pub(crate) fn edge_endpoints(&self, ei: usize) -> (usize, usize) {
        let e = &self.edges[ei];
        (self.index[&e.from], self.index[&e.to])
    }

    /// Largest absolute delay over all edges (0 for an edgeless graph).
    pub fn max_abs_sigma(&self) -> i64 {
        self.edges.iter().map(|e| e.sigma.abs()).max().unwrap_or(0)
    }

    /// Runs the full semantic validation with the default cycle budget.
    pub fn validate(&self) -> Result<ValidationReport, CycleBudgetExceeded> {
        self.validate_with_budget(DEFAULT_CYCLE_BUDGET)
    }

    /// Runs the full semantic validation; the budget caps simple-cycle
    /// enumeration used by the closed-walk check.
    pub fn validate_with_budget(
        &self,
        budget: usize,
    ) -> Result<ValidationReport, CycleBudgetExceeded> {
        validate::validate(self, budget)
    }

    /// Enumerates all simple directed cycles with the default budget.
    pub fn simple_cycles(&self) -> Result<Vec<SimpleCycle>, CycleBudgetExceeded> {
        self.simple_cycles_with_budget(DEFAULT_CYCLE_BUDGET)
    }

    /// Enumerates all simple directed cycles of the multigraph in canonical
    /// order: each cycle starts at its smallest node, and cycles are sorted
    /// lexicographically by their edge sequence.
    pub fn simple_cycles_with_budget(
        &self,
        budget: usize,
    ) -> Result<Vec<SimpleCycle>, CycleBudgetExceeded> {
        cycles::enumerate(self, budget)
    }

    /// Classifies the graph's cycle delay signs.
    pub fn orientation(&self) -> Result<Orientation, CycleBudgetExceeded> {
        self.orientation_with_budget(DEFAULT_CYCLE_BUDGET)
    }

    pub fn orientation_with_budget(
        &self,
        budget: usize,
    ) -> Result<Orientation, CycleBudgetExceeded> {
        let cycles = self.simple_cycles_with_budget(budget)?;
        let any_pos = cycles.iter().any(|c| c.sigma_sum > 0);
        let any_nonpos = cycles.iter().any(|c| c.sigma_sum <= 0);
        Ok(if any_pos && any_nonpos {
            Orientation::Bidirectional
        } else if any_pos {
            Orientation::Positive
        } else {
            Orientation::Negative
        })
    }

    /// Strongly connected component id per node (ids are arbitrary but
    /// deterministic; nodes in the same component share an id).
    pub fn scc_ids(&self) -> Vec<usize> {
        scc::tarjan(self)
    }

    /// Time reversal: every edge is flipped with its delay negated, and
    /// input/output roles swap. Turns a negative-orientation graph into a
    /// positive one with identical cycle and path lengths, which is how the
    /// oracle and the measures agree on graphs whose recurrences run
    /// backwards in time.
    pub fn reversed(&self) -> CyclicGraph {
        let nodes = self
            .nodes
            .iter()
            .map(|(id, kind)| {
                let kind = match kind {
                    NodeKind::Input => NodeKind::Output,
                    NodeKind::Output => NodeKind::Input,
                    NodeKind::Hidden => NodeKind::Hidden,
                };
                (id.clone(), kind)
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(e.to.clone(), e.from.clone(), -e.sigma))
            .collect();
        CyclicGraph::new(self.period, nodes, edges).expect("reversal preserves well-formedness")
    }

    /// Smallest divisor `m'` of the declared period such that shifting every
    /// time index by `m'` (mod the period) is a delay-preserving
    /// automorphism. Equals the minimal period of the unfolded graph; the
    /// declared period stays authoritative for validation.
    pub fn minimal_period(&self) -> i64 {
        'candidate: for m_prime in 1..=self.period {
            if self.period % m_prime != 0 {
                continue;
            }
            for (id, kind) in &self.nodes {
                let shifted = NodeId::new(
                    id.label.clone(),
                    (id.time_index + m_prime).rem_euclid(self.period),
                );
                match self.kind_of(&shifted) {
                    Some(k) if k == *kind => {}
                    _ => continue 'candidate,
                }
            }
            for e in &self.edges {
                let shifted = Edge::new(
                    NodeId::new(
                        e.from.label.clone(),
                        (e.from.time_index + m_prime).rem_euclid(self.period),
                    ),
                    NodeId::new(
                        e.to.label.clone(),
                        (e.to.time_index + m_prime).rem_euclid(self.period),
                    ),
                    e.sigma,
                );
                if self.edges.binary_search(&shifted).is_err() {
                    continue 'candidate;
                }
            }
            return m_prime;
        }
        self.period
    }
}

/// Incremental constructor used by fixtures, parsers and tests.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    period: i64,
    nodes: Vec<(NodeId, NodeKind)>,
    edges: Vec<Edge>,
}

impl GraphBuilder {
    pub fn new(period: i64) -> Self {
        GraphBuilder {
            period,
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn node(mut self, kind: NodeKind, label: &str, time_index: i64) -> Self {
        self.nodes.push((NodeId::new(label, time_index), kind));
        self
    }

    pub fn input(self, label: &str, time_index: i64) -> Self {
        self.node(NodeKind::Input, label, time_index)
    }

    pub fn hidden(self, label: &str, time_index: i64) -> Self {
        self.node(NodeKind::Hidden, label, time_index)
    }

    pub fn output(self, label: &str, time_index: i64) -> Self {
        self.node(NodeKind::Output, label, time_index)
    }

    pub fn edge(mut self, from: (&str, i64), to: (&str, i64), sigma: i64) -> Self {
        self.edges.push(Edge::new(
            NodeId::new(from.0, from.1),
            NodeId::new(to.0, to.1),
            sigma,
        ));
        self
    }

    pub fn build(self) -> Result<CyclicGraph, GraphBuildError> {
        CyclicGraph::new(self.period, self.nodes, self.edges)
    }
}
