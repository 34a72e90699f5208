//! Simple-cycle enumeration for directed multigraphs.
//!
//! Johnson-style backtracking (blocked sets with recursive unblocking),
//! extended so that parallel edges yield distinct cycles: the search walks
//! edges rather than nodes, and a cycle is an edge sequence. Every cycle is
//! discovered exactly once, rooted at its smallest node in canonical order.
//! Architecture graphs are tiny, so exhaustive enumeration is the right
//! tool; a hard budget guards against pathological inputs.

use std::collections::HashSet;

use thiserror::Error;

use super::{CyclicGraph, SimpleCycle};

/// Default cap on the number of enumerated cycles.
pub const DEFAULT_CYCLE_BUDGET: usize = 1_000_000;

/// The graph has more simple cycles than the configured cap.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("simple-cycle enumeration exceeded the budget of {budget}")]
pub struct CycleBudgetExceeded {
    pub budget: usize,
}

struct Search<'g> {
    graph: &'g CyclicGraph,
    root: usize,
    blocked: Vec<bool>,
    block_lists: Vec<HashSet<usize>>,
    path: Vec<usize>,
    found: Vec<Vec<usize>>,
    budget: usize,
    emitted: usize,
}

impl Search<'_> {
    fn unblock(&mut self, node: usize) {
        let mut todo = vec![node];
        while let Some(v) = todo.pop() {
            self.blocked[v] = false;
            for w in self.block_lists[v].drain() {
                todo.push(w);
            }
        }
    }

    fn circuit(&mut self, v: usize) -> Result<bool, CycleBudgetExceeded> {
        let mut found = false;
        self.blocked[v] = true;
        for &ei in self.graph.outgoing(v) {
            let (_, w) = self.graph.edge_endpoints(ei);
            if w < self.root {
                continue;
            }
            if w == self.root {
                self.emitted += 1;
                if self.emitted > self.budget {
                    return Err(CycleBudgetExceeded {
                        budget: self.budget,
                    });
                }
                let mut cycle = self.path.clone();
                cycle.push(ei);
                self.found.push(cycle);
                found = true;
            } else if !self.blocked[w] {
                self.path.push(ei);
                if self.circuit(w)? {
                    found = true;
                }
                self.path.pop();
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &ei in self.graph.outgoing(v) {
                let (_, w) = self.graph.edge_endpoints(ei);
                if w >= self.root {
                    self.block_lists[w].insert(v);
                }
            }
        }
        Ok(found)
    }
}

pub(crate) fn enumerate(
    graph: &CyclicGraph,
    budget: usize,
) -> Result<Vec<SimpleCycle>, CycleBudgetExceeded> {
    let n = graph.node_count();
    let mut all: Vec<Vec<usize>> = Vec::new();
    let mut emitted = 0usize;
    for root in 0..n {
        let mut search = Search {
            graph,
            root,
            blocked: vec![false; n],
            block_lists: vec![HashSet::new(); n],
            path: Vec::new(),
            found: Vec::new(),
            budget,
            emitted,
        };
        search.circuit(root)?;
        emitted = search.emitted;
        all.extend(search.found);
    }
    // each cycle already starts at its smallest node (the search root);
    // sort lexicographically on the edge index sequence, which follows the
    // canonical edge order
    all.sort();
    Ok(all
        .into_iter()
        .map(|edge_indices| {
            SimpleCycle::from_edges(
                edge_indices
                    .into_iter()
                    .map(|ei| graph.edge(ei).clone())
                    .collect(),
            )
        })
        .collect())
}
