//! Seeded generation of random valid graphs.
//!
//! Validity is obtained by construction rather than rejection sampling.
//! Hidden nodes get integer potentials; an edge `u -> v` carries delay
//! `phi(v) - phi(u) + delta` with `delta` a nonnegative multiple of the
//! period, and `delta = 0` is only allowed "forward" in an arbitrary node
//! order. Every cycle must then use at least one `delta >= m` edge, so all
//! delay sums are positive; setting node time indices to `phi mod m` makes
//! the delays congruent to the time-index differences. An optional final
//! mirror step (negate delays, reflect time indices) produces
//! negative-orientation graphs.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::archgraph::{CyclicGraph, Edge, NodeId, NodeKind};

#[derive(Debug, Clone)]
pub struct RandomGraphParams {
    /// Hidden node count is drawn from `1..=max_hidden`; total node count is
    /// `max_hidden + 2` (one input and one output port).
    pub max_hidden: usize,
    pub max_period: i64,
    /// Edges whose delay would exceed this in magnitude are dropped.
    pub max_abs_sigma: i64,
    /// Probability of wiring each ordered hidden pair.
    pub edge_density: f64,
    /// When true, roughly half of the graphs are mirrored into negative
    /// orientation.
    pub allow_negative: bool,
}

impl Default for RandomGraphParams {
    fn default() -> Self {
        RandomGraphParams {
            max_hidden: 6,
            max_period: 3,
            max_abs_sigma: 4,
            edge_density: 0.35,
            allow_negative: true,
        }
    }
}

/// Generates a graph that satisfies every validity condition, deterministic
/// in `seed`.
pub fn random_valid_graph(seed: u64, params: &RandomGraphParams) -> CyclicGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let m = rng.gen_range(1..=params.max_period.max(1));
    let n_hidden = rng.gen_range(1..=params.max_hidden.max(1));
    let potentials: Vec<i64> = (0..n_hidden).map(|_| rng.gen_range(0..=2)).collect();
    let labels: Vec<String> = (0..n_hidden).map(|j| format!("h{j}")).collect();
    let times: Vec<i64> = potentials.iter().map(|p| p.rem_euclid(m)).collect();

    let hidden_id = |j: usize| NodeId::new(labels[j].clone(), times[j]);

    let mut edges: Vec<Edge> = Vec::new();
    let push_edge = |edges: &mut Vec<Edge>, e: Edge| {
        if !edges.contains(&e) {
            edges.push(e);
        }
    };

    for from in 0..n_hidden {
        for to in 0..n_hidden {
            if !rng.gen_bool(params.edge_density) {
                continue;
            }
            let delta = if from < to && rng.gen_bool(0.6) {
                0
            } else if rng.gen_bool(0.8) {
                m
            } else {
                2 * m
            };
            let sigma = potentials[to] - potentials[from] + delta;
            if sigma.abs() > params.max_abs_sigma {
                continue;
            }
            push_edge(&mut edges, Edge::new(hidden_id(from), hidden_id(to), sigma));
        }
    }

    // condition (2): make sure at least one cycle exists
    if !contains_cycle(n_hidden, &labels, &edges) {
        let j = rng.gen_range(0..n_hidden);
        push_edge(
            &mut edges,
            Edge::new(hidden_id(j), hidden_id(j), m),
        );
    }

    // io ports, wired through one pivot hidden node so an input-output path
    // always exists
    let t_x = rng.gen_range(0..m);
    let t_y = rng.gen_range(0..m);
    let x = NodeId::new("x", t_x);
    let y = NodeId::new("y", t_y);
    let pivot = rng.gen_range(0..n_hidden);
    push_edge(
        &mut edges,
        Edge::new(x.clone(), hidden_id(pivot), port_sigma(times[pivot] - t_x, m)),
    );
    push_edge(
        &mut edges,
        Edge::new(hidden_id(pivot), y.clone(), port_sigma(t_y - times[pivot], m)),
    );

    // condition (4): patch hidden nodes lacking incoming or outgoing edges;
    // port edges never join cycles, so any congruent delay is safe
    for j in 0..n_hidden {
        let id = hidden_id(j);
        if !edges.iter().any(|e| e.to == id) {
            push_edge(
                &mut edges,
                Edge::new(x.clone(), id.clone(), port_sigma(times[j] - t_x, m)),
            );
        }
        if !edges.iter().any(|e| e.from == id) {
            push_edge(
                &mut edges,
                Edge::new(id.clone(), y.clone(), port_sigma(t_y - times[j], m)),
            );
        }
    }

    let mut nodes: Vec<(NodeId, NodeKind)> = vec![(x, NodeKind::Input), (y, NodeKind::Output)];
    for j in 0..n_hidden {
        nodes.push((hidden_id(j), NodeKind::Hidden));
    }

    if params.allow_negative && rng.gen_bool(0.5) {
        nodes = nodes
            .into_iter()
            .map(|(id, kind)| (mirror_node(&id, m), kind))
            .collect();
        edges = edges
            .into_iter()
            .map(|e| Edge::new(mirror_node(&e.from, m), mirror_node(&e.to, m), -e.sigma))
            .collect();
    }

    let graph = CyclicGraph::new(m, nodes, edges).expect("generated graph is well-formed");
    debug_assert!(graph.validate().unwrap().is_valid());
    graph
}

fn hidden_index(labels: &[String], id: &NodeId) -> usize {
    labels
        .iter()
        .position(|l| *l == id.label)
        .unwrap_or(usize::MAX)
}

/// Three-color DFS over the hidden-to-hidden adjacency.
fn contains_cycle(n: usize, labels: &[String], edges: &[Edge]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        let (from, to) = (hidden_index(labels, &e.from), hidden_index(labels, &e.to));
        if from < n && to < n {
            adj[from].push(to);
        }
    }
    // 0 = unseen, 1 = on stack, 2 = done
    let mut color = vec![0u8; n];
    fn dfs(v: usize, adj: &[Vec<usize>], color: &mut [u8]) -> bool {
        color[v] = 1;
        for &w in &adj[v] {
            if color[w] == 1 || (color[w] == 0 && dfs(w, adj, color)) {
                return true;
            }
        }
        color[v] = 2;
        false
    }
    (0..n).any(|v| color[v] == 0 && dfs(v, &adj, &mut color))
}

/// Smallest-magnitude delay congruent to `diff` modulo `m`.
fn port_sigma(diff: i64, m: i64) -> i64 {
    let r = diff.rem_euclid(m);
    if r * 2 > m {
        r - m
    } else {
        r
    }
}

/// Time reflection: preserves the congruence condition while negating every
/// delay, turning a positive-orientation graph into a negative one.
fn mirror_node(id: &NodeId, m: i64) -> NodeId {
    NodeId::new(id.label.clone(), (m - id.time_index).rem_euclid(m))
}
