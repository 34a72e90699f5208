//! Semantic validation of cyclic graphs.
//!
//! Violations are data: the report lists everything that is wrong together
//! with a concrete witness. The closed-walk condition is decided through
//! the per-component sign criterion: every closed walk has a nonzero delay
//! sum if and only if, inside each strongly connected component, all simple
//! cycles carry delay sums of one strict sign. (Two same-component cycles of
//! opposite sign compose into a zero-sum closed walk via their connecting
//! paths; same-sign cycles cannot, because any closed walk decomposes into
//! simple cycles of its component.)

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::{CycleBudgetExceeded, CyclicGraph, Edge, NodeId, NodeKind, SimpleCycle};

/// A single violated condition with its witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation")]
pub enum Violation {
    /// The delay is not congruent to the time-index difference modulo the
    /// period.
    SigmaResidueMismatch { edge: Edge },
    /// The graph has no directed cycle at all.
    NoDirectedCycle,
    /// A simple cycle whose delays sum to zero.
    ZeroSumCycle { cycle: SimpleCycle },
    /// One strongly connected component contains cycles of both signs, which
    /// compose into a zero-sum closed walk.
    MixedSignComponent {
        positive: SimpleCycle,
        negative: SimpleCycle,
    },
    InputHasIncoming { node: NodeId, edge: Edge },
    OutputHasOutgoing { node: NodeId, edge: Edge },
    HiddenWithoutIncoming { node: NodeId },
    HiddenWithoutOutgoing { node: NodeId },
    /// One of the three node classes is empty.
    MissingKind { kind: NodeKind },
}

impl Violation {
    /// Stable machine-readable code, used by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Violation::SigmaResidueMismatch { .. } => "CONDITION1",
            Violation::NoDirectedCycle => "CONDITION2",
            Violation::ZeroSumCycle { .. } | Violation::MixedSignComponent { .. } => "CONDITION3",
            Violation::InputHasIncoming { .. }
            | Violation::OutputHasOutgoing { .. }
            | Violation::HiddenWithoutIncoming { .. }
            | Violation::HiddenWithoutOutgoing { .. } => "CONDITION4",
            Violation::MissingKind { .. } => "NONEMPTY",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SigmaResidueMismatch { edge } => write!(
                f,
                "delay of edge {edge} is not congruent to its time-index difference modulo the period"
            ),
            Violation::NoDirectedCycle => write!(f, "graph has no directed cycle"),
            Violation::ZeroSumCycle { cycle } => {
                write!(f, "closed walk with zero delay sum: {cycle}")
            }
            Violation::MixedSignComponent { positive, negative } => write!(
                f,
                "one component mixes cycle signs: {positive} (sum {}) vs {negative} (sum {})",
                positive.sigma_sum, negative.sigma_sum
            ),
            Violation::InputHasIncoming { node, edge } => {
                write!(f, "input node {node} has incoming edge {edge}")
            }
            Violation::OutputHasOutgoing { node, edge } => {
                write!(f, "output node {node} has outgoing edge {edge}")
            }
            Violation::HiddenWithoutIncoming { node } => {
                write!(f, "hidden node {node} has no incoming edge")
            }
            Violation::HiddenWithoutOutgoing { node } => {
                write!(f, "hidden node {node} has no outgoing edge")
            }
            Violation::MissingKind { kind } => write!(f, "graph has no {} node", kind.as_str()),
        }
    }
}

/// Outcome of semantic validation; empty means the graph satisfies every
/// defining condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub(crate) fn validate(
    graph: &CyclicGraph,
    budget: usize,
) -> Result<ValidationReport, CycleBudgetExceeded> {
    let mut violations = Vec::new();
    let m = graph.period();

    for e in graph.edges() {
        let delta = e.to.time_index - e.from.time_index;
        if (e.sigma - delta).rem_euclid(m) != 0 {
            violations.push(Violation::SigmaResidueMismatch { edge: e.clone() });
        }
    }

    let cycles = graph.simple_cycles_with_budget(budget)?;
    if cycles.is_empty() {
        violations.push(Violation::NoDirectedCycle);
    }

    let scc = graph.scc_ids();
    let mut per_component: HashMap<usize, (Option<&SimpleCycle>, Option<&SimpleCycle>)> =
        HashMap::new();
    for cycle in &cycles {
        if cycle.sigma_sum == 0 {
            violations.push(Violation::ZeroSumCycle {
                cycle: cycle.clone(),
            });
            continue;
        }
        let comp = scc[graph.node_index(&cycle.edges[0].from).expect("cycle node")];
        let entry = per_component.entry(comp).or_default();
        if cycle.sigma_sum > 0 {
            entry.0.get_or_insert(cycle);
        } else {
            entry.1.get_or_insert(cycle);
        }
    }
    let mut mixed: Vec<_> = per_component
        .values()
        .filter_map(|(pos, neg)| match (pos, neg) {
            (Some(p), Some(n)) => Some(Violation::MixedSignComponent {
                positive: (*p).clone(),
                negative: (*n).clone(),
            }),
            _ => None,
        })
        .collect();
    mixed.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    violations.extend(mixed);

    for (idx, (id, kind)) in graph.nodes().iter().enumerate() {
        match kind {
            NodeKind::Input => {
                if let Some(&ei) = graph.incoming(idx).first() {
                    violations.push(Violation::InputHasIncoming {
                        node: id.clone(),
                        edge: graph.edge(ei).clone(),
                    });
                }
            }
            NodeKind::Output => {
                if let Some(&ei) = graph.outgoing(idx).first() {
                    violations.push(Violation::OutputHasOutgoing {
                        node: id.clone(),
                        edge: graph.edge(ei).clone(),
                    });
                }
            }
            NodeKind::Hidden => {
                if graph.incoming(idx).is_empty() {
                    violations.push(Violation::HiddenWithoutIncoming { node: id.clone() });
                }
                if graph.outgoing(idx).is_empty() {
                    violations.push(Violation::HiddenWithoutOutgoing { node: id.clone() });
                }
            }
        }
    }

    for kind in [NodeKind::Input, NodeKind::Hidden, NodeKind::Output] {
        if !graph.nodes().iter().any(|(_, k)| *k == kind) {
            violations.push(Violation::MissingKind { kind });
        }
    }

    Ok(ValidationReport { violations })
}
