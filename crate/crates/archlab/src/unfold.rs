//! Finite windows of the unfolded (time-expanded) graph.
//!
//! The unfolding replicates each cyclic node `(i, p)` at every time
//! `t ≡ i (mod m)` and connects `(t, p) -> (t + sigma, p')` for each cyclic
//! edge with delay `sigma`. Windows are half-open time ranges `[t_lo, t_hi)`
//! and contain an edge only when both endpoints fall inside; this keeps
//! windows composable and boundary semantics unambiguous.

use std::collections::BinaryHeap;
use std::collections::HashMap;

use thiserror::Error;

use crate::archgraph::{CyclicGraph, NodeKind};

/// Default cap on window node count.
pub const DEFAULT_WINDOW_CAP: usize = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UnfoldError {
    #[error("window [{t_lo}, {t_hi}) is empty or inverted")]
    EmptyWindow { t_lo: i64, t_hi: i64 },
    #[error("window would hold {nodes} nodes, above the cap of {cap}")]
    WindowTooLarge { nodes: usize, cap: usize },
}

/// One materialized node of the unfolded graph. Ordered by `(time, label)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnfoldedNode {
    pub time: i64,
    pub label: String,
    pub kind: NodeKind,
}

impl UnfoldedNode {
    fn key(&self) -> (i64, &str) {
        (self.time, &self.label)
    }
}

/// A window edge, pointing into the window's node list and back at the
/// cyclic edge it instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowEdge {
    pub from: usize,
    pub to: usize,
    /// Index into the source graph's canonical edge list.
    pub cyclic_edge: usize,
}

/// A finite slice of the unfolded graph over `[t_lo, t_hi)`.
#[derive(Debug, Clone)]
pub struct UnfoldedWindow {
    pub t_lo: i64,
    pub t_hi: i64,
    /// Sorted by `(time, label)`.
    nodes: Vec<UnfoldedNode>,
    edges: Vec<WindowEdge>,
    /// Kahn order with `(time, label)` tie-breaking. Shorter than `nodes`
    /// exactly when the window contains a directed cycle (which only happens
    /// for semantically invalid source graphs).
    topo: Vec<usize>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
}

impl UnfoldedWindow {
    pub fn nodes(&self) -> &[UnfoldedNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[WindowEdge] {
        &self.edges
    }

    pub fn node_index(&self, time: i64, label: &str) -> Option<usize> {
        self.nodes
            .binary_search_by(|n| n.key().cmp(&(time, label)))
            .ok()
    }

    /// Index range of the nodes materialized at `time`.
    pub fn time_range(&self, time: i64) -> std::ops::Range<usize> {
        let lo = self.nodes.partition_point(|n| n.time < time);
        let hi = self.nodes.partition_point(|n| n.time <= time);
        lo..hi
    }

    /// Window-edge indices leaving node `idx`.
    pub fn outgoing(&self, idx: usize) -> &[usize] {
        &self.outgoing[idx]
    }

    /// Window-edge indices entering node `idx`.
    pub fn incoming(&self, idx: usize) -> &[usize] {
        &self.incoming[idx]
    }

    /// True when the window's edge relation is acyclic. Holds for every
    /// window of a semantically valid graph.
    pub fn is_dag(&self) -> bool {
        self.topo.len() == self.nodes.len()
    }

    /// Topological order over all nodes, or `None` when the window is
    /// cyclic.
    pub fn topo_order(&self) -> Option<&[usize]> {
        self.is_dag().then_some(self.topo.as_slice())
    }

    pub fn contains_edge(&self, from: (i64, &str), to: (i64, &str)) -> bool {
        match (
            self.node_index(from.0, from.1),
            self.node_index(to.0, to.1),
        ) {
            (Some(f), Some(t)) => self.edges.iter().any(|e| e.from == f && e.to == t),
            _ => false,
        }
    }
}

/// Materializes the window `[t_lo, t_hi)` with the default node cap.
pub fn unfold(graph: &CyclicGraph, t_lo: i64, t_hi: i64) -> Result<UnfoldedWindow, UnfoldError> {
    unfold_with_cap(graph, t_lo, t_hi, DEFAULT_WINDOW_CAP)
}

pub fn unfold_with_cap(
    graph: &CyclicGraph,
    t_lo: i64,
    t_hi: i64,
    cap: usize,
) -> Result<UnfoldedWindow, UnfoldError> {
    if t_hi <= t_lo {
        return Err(UnfoldError::EmptyWindow { t_lo, t_hi });
    }
    let m = graph.period();
    let span = (t_hi - t_lo) as usize;
    // residue coverage bound before materializing anything
    let estimate = span.saturating_mul(graph.node_count()) / m.max(1) as usize + graph.node_count();
    if estimate > cap {
        return Err(UnfoldError::WindowTooLarge {
            nodes: estimate,
            cap,
        });
    }

    let mut nodes: Vec<UnfoldedNode> = Vec::new();
    for t in t_lo..t_hi {
        let residue = t.rem_euclid(m);
        for (id, kind) in graph.nodes() {
            if id.time_index == residue {
                nodes.push(UnfoldedNode {
                    time: t,
                    label: id.label.clone(),
                    kind: *kind,
                });
            }
        }
    }
    nodes.sort_by(|a, b| a.key().cmp(&b.key()));
    if nodes.len() > cap {
        return Err(UnfoldError::WindowTooLarge {
            nodes: nodes.len(),
            cap,
        });
    }
    let index: HashMap<(i64, &str), usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| ((n.time, n.label.as_str()), i))
        .collect();

    let mut edges = Vec::new();
    for t in t_lo..t_hi {
        let residue = t.rem_euclid(m);
        for (ci, e) in graph.edges().iter().enumerate() {
            if e.from.time_index != residue {
                continue;
            }
            let t_to = t + e.sigma;
            if t_to < t_lo || t_to >= t_hi {
                continue;
            }
            let from = index[&(t, e.from.label.as_str())];
            let to = index[&(t_to, e.to.label.as_str())];
            edges.push(WindowEdge {
                from,
                to,
                cyclic_edge: ci,
            });
        }
    }
    edges.sort_by_key(|e| (e.from, e.to, e.cyclic_edge));

    let mut outgoing = vec![Vec::new(); nodes.len()];
    let mut incoming = vec![Vec::new(); nodes.len()];
    for (wi, e) in edges.iter().enumerate() {
        outgoing[e.from].push(wi);
        incoming[e.to].push(wi);
    }

    let topo = kahn_order(&nodes, &edges, &outgoing);
    Ok(UnfoldedWindow {
        t_lo,
        t_hi,
        nodes,
        edges,
        topo,
        outgoing,
        incoming,
    })
}

/// Kahn peeling with a min-heap on `(time, label)`; node indices already
/// follow that order, so the heap holds plain indices.
fn kahn_order(
    nodes: &[UnfoldedNode],
    edges: &[WindowEdge],
    outgoing: &[Vec<usize>],
) -> Vec<usize> {
    let mut in_degree = vec![0usize; nodes.len()];
    for e in edges {
        in_degree[e.to] += 1;
    }
    let mut ready: BinaryHeap<std::cmp::Reverse<usize>> = in_degree
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 0)
        .map(|(i, _)| std::cmp::Reverse(i))
        .collect();
    let mut order = Vec::with_capacity(nodes.len());
    while let Some(std::cmp::Reverse(v)) = ready.pop() {
        order.push(v);
        for &wi in &outgoing[v] {
            let to = edges[wi].to;
            in_degree[to] -= 1;
            if in_degree[to] == 0 {
                ready.push(std::cmp::Reverse(to));
            }
        }
    }
    order
}

/// True when the window has no directed cycle.
pub fn check_dag(window: &UnfoldedWindow) -> bool {
    window.is_dag()
}

/// Checks that shifting time by one period maps the window `[0, len)` onto
/// `[m, m + len)` exactly: same nodes, same kinds, same edges.
pub fn check_shift_invariance(graph: &CyclicGraph, window_len: i64) -> Result<bool, UnfoldError> {
    let m = graph.period();
    let base = unfold(graph, 0, window_len)?;
    let shifted = unfold(graph, m, m + window_len)?;
    Ok(windows_isomorphic_under_shift(&base, &shifted, m))
}

pub(crate) fn windows_isomorphic_under_shift(
    base: &UnfoldedWindow,
    shifted: &UnfoldedWindow,
    shift: i64,
) -> bool {
    if base.nodes.len() != shifted.nodes.len() || base.edges.len() != shifted.edges.len() {
        return false;
    }
    // node lists are sorted by (time, label), so the shift must map them
    // index-by-index
    for (a, b) in base.nodes.iter().zip(shifted.nodes.iter()) {
        if a.time + shift != b.time || a.label != b.label || a.kind != b.kind {
            return false;
        }
    }
    let mut base_edges: Vec<(usize, usize)> = base.edges.iter().map(|e| (e.from, e.to)).collect();
    let mut shifted_edges: Vec<(usize, usize)> =
        shifted.edges.iter().map(|e| (e.from, e.to)).collect();
    base_edges.sort_unstable();
    shifted_edges.sort_unstable();
    base_edges == shifted_edges
}
