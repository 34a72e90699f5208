//! Reference forward executor over unfolded windows.
//!
//! Each cyclic node owns a transition function applied at every time step;
//! weights are keyed by cyclic edge, which is exactly the usual
//! weight-sharing across time. Two cells are provided:
//!
//! * `Tanh`: `h_v = tanh(b_v + sum W(e) h_src(e))` over the in-window
//!   incoming edges;
//! * `MdLstm`: a multidimensional LSTM with one forget gate per incoming
//!   edge, so nodes may have any number of predecessors. Block input uses
//!   tanh, gates use the logistic function, and the cell state is
//!   `i * z + sum_e f_e * c_src(e)`.
//!
//! Edges entering the window from before its start contribute zero state,
//! which makes the forward pass total. Everything is deterministic: nodes
//! are evaluated in the window's topological order and incoming edges in
//! canonical order, so identical seeds and inputs give bitwise-identical
//! traces.
//!
//! `sensitivity` ties execution back to graph structure: with strictly
//! positive weights and a monotone cell, a finite-difference perturbation
//! of an input propagates to an output exactly when the unfolded window has
//! a path between them, since every existing path contributes a strictly
//! positive derivative term and nothing cancels.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::archgraph::{CyclicGraph, NodeKind};
use crate::unfold::{unfold, UnfoldedWindow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Tanh,
    MdLstm,
}

/// Which weight matrix of a transition function an edge feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WeightRole {
    /// The single matrix of the tanh cell.
    Tanh,
    BlockInput,
    InputGate,
    OutputGate,
    /// Contribution to the forget gate guarding the given incoming edge of
    /// the same target node.
    Forget(usize),
}

impl WeightRole {
    fn name(self) -> String {
        match self {
            WeightRole::Tanh => "tanh".into(),
            WeightRole::BlockInput => "block".into(),
            WeightRole::InputGate => "input-gate".into(),
            WeightRole::OutputGate => "output-gate".into(),
            WeightRole::Forget(e) => format!("forget({e})"),
        }
    }
}

/// Bias slot of a node's transition function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BiasRole {
    Tanh,
    BlockInput,
    InputGate,
    OutputGate,
}

/// Dense row-major matrix, just big enough for the executor.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    fn random(rows: usize, cols: usize, rng: &mut StdRng, lo: f64, hi: f64) -> Matrix {
        Matrix {
            rows,
            cols,
            data: (0..rows * cols).map(|_| rng.gen_range(lo..hi)).collect(),
        }
    }

    /// `out += self * x`
    fn accumulate(&self, x: &[f64], out: &mut [f64]) {
        for (row, o) in self.data.chunks(self.cols).zip(out.iter_mut()) {
            *o += row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ExecError {
    #[error("no input supplied for time {time}")]
    MissingInput { time: i64 },
    #[error("{context}: expected dimension {expected}, got {got}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        got: usize,
    },
    #[error("no weight matrix for edge {edge} in role {role}")]
    MissingWeight { edge: usize, role: String },
    #[error("label {label} has no configured size")]
    UnknownLabel { label: String },
    #[error("window is not acyclic")]
    CyclicWindow,
}

/// Sizes, weights and biases of a concrete network over a cyclic graph.
///
/// Weights are per `(cyclic edge, role)`; biases per `(label, role)` with
/// forget-gate biases per guarded edge. Anything not set is zero.
#[derive(Debug, Clone)]
pub struct NetworkConfig {
    sizes: BTreeMap<String, usize>,
    weights: BTreeMap<(usize, WeightRole), Matrix>,
    biases: BTreeMap<(String, BiasRole), Vec<f64>>,
    forget_biases: BTreeMap<usize, f64>,
    pub seed: u64,
}

impl NetworkConfig {
    pub fn new(sizes: BTreeMap<String, usize>) -> NetworkConfig {
        NetworkConfig {
            sizes,
            weights: BTreeMap::new(),
            biases: BTreeMap::new(),
            forget_biases: BTreeMap::new(),
            seed: 0,
        }
    }

    /// Generates every weight the chosen cell needs, drawn uniformly from
    /// `range`, with one size for all labels. Deterministic in `seed`.
    pub fn seeded(
        graph: &CyclicGraph,
        hidden_size: usize,
        seed: u64,
        range: (f64, f64),
        cell: CellKind,
    ) -> NetworkConfig {
        let sizes: BTreeMap<String, usize> = graph
            .nodes()
            .iter()
            .map(|(id, _)| (id.label.clone(), hidden_size))
            .collect();
        let mut config = NetworkConfig::new(sizes);
        config.seed = seed;
        let mut rng = StdRng::seed_from_u64(seed);
        let (lo, hi) = range;
        let dims = |ei: usize| {
            let e = graph.edge(ei);
            (config.sizes[&e.to.label], config.sizes[&e.from.label])
        };
        for ei in 0..graph.edges().len() {
            let (rows, cols) = dims(ei);
            match cell {
                CellKind::Tanh => {
                    config
                        .weights
                        .insert((ei, WeightRole::Tanh), Matrix::random(rows, cols, &mut rng, lo, hi));
                }
                CellKind::MdLstm => {
                    for role in [
                        WeightRole::BlockInput,
                        WeightRole::InputGate,
                        WeightRole::OutputGate,
                    ] {
                        config
                            .weights
                            .insert((ei, role), Matrix::random(rows, cols, &mut rng, lo, hi));
                    }
                }
            }
        }
        if cell == CellKind::MdLstm {
            for idx in 0..graph.node_count() {
                for &target in graph.incoming(idx) {
                    for &source in graph.incoming(idx) {
                        let (rows, cols) = dims(source);
                        config.weights.insert(
                            (source, WeightRole::Forget(target)),
                            Matrix::random(rows, cols, &mut rng, lo, hi),
                        );
                    }
                }
            }
        }
        config
    }

    pub fn size_of(&self, label: &str) -> Result<usize, ExecError> {
        self.sizes
            .get(label)
            .copied()
            .ok_or_else(|| ExecError::UnknownLabel {
                label: label.to_string(),
            })
    }

    pub fn set_weight(&mut self, edge: usize, role: WeightRole, matrix: Matrix) {
        self.weights.insert((edge, role), matrix);
    }

    pub fn set_bias(&mut self, label: &str, role: BiasRole, bias: Vec<f64>) {
        self.biases.insert((label.to_string(), role), bias);
    }

    /// Scalar bias added to every coordinate of the forget gate guarding
    /// `edge`.
    pub fn set_forget_bias(&mut self, edge: usize, bias: f64) {
        self.forget_biases.insert(edge, bias);
    }

    fn weight(&self, edge: usize, role: WeightRole) -> Result<&Matrix, ExecError> {
        self.weights
            .get(&(edge, role))
            .ok_or(ExecError::MissingWeight {
                edge,
                role: role.name(),
            })
    }

    fn bias_into(&self, label: &str, role: BiasRole, out: &mut [f64]) {
        if let Some(b) = self.biases.get(&(label.to_string(), role)) {
            for (o, v) in out.iter_mut().zip(b) {
                *o += v;
            }
        }
    }
}

/// Outputs of one forward pass, indexed like the window's node list.
#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionTrace {
    pub hidden: Vec<Vec<f64>>,
    /// Cell states; present for the LSTM cell only.
    pub cell_state: Option<Vec<Vec<f64>>>,
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Runs the network over the window. `inputs` maps a time step to the
/// vector fed to every input node materialized at that time.
pub fn forward(
    window: &UnfoldedWindow,
    graph: &CyclicGraph,
    config: &NetworkConfig,
    inputs: &BTreeMap<i64, Vec<f64>>,
    cell: CellKind,
) -> Result<ExecutionTrace, ExecError> {
    let order = window.topo_order().ok_or(ExecError::CyclicWindow)?;
    let n = window.nodes().len();
    let mut hidden: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut cell_state: Vec<Vec<f64>> = vec![Vec::new(); n];

    for &idx in order {
        let node = &window.nodes()[idx];
        let size = config.size_of(&node.label)?;
        if node.kind == NodeKind::Input {
            let value = inputs
                .get(&node.time)
                .ok_or(ExecError::MissingInput { time: node.time })?;
            if value.len() != size {
                return Err(ExecError::DimensionMismatch {
                    context: format!("input at time {}", node.time),
                    expected: size,
                    got: value.len(),
                });
            }
            hidden[idx] = value.clone();
            cell_state[idx] = vec![0.0; size];
            continue;
        }

        // in-window incoming edges; out-of-window sources are zero state and
        // contribute nothing to any sum
        let in_edges: Vec<(usize, usize)> = window
            .incoming(idx)
            .iter()
            .map(|&wi| {
                let e = &window.edges()[wi];
                (e.cyclic_edge, e.from)
            })
            .collect();

        let gather = |role_of: &dyn Fn(usize) -> WeightRole,
                      out: &mut [f64]|
         -> Result<(), ExecError> {
            for &(ce, src) in &in_edges {
                let w = config.weight(ce, role_of(ce))?;
                let x = &hidden[src];
                if w.cols != x.len() || w.rows != out.len() {
                    return Err(ExecError::DimensionMismatch {
                        context: format!("weight for edge {}", graph.edge(ce)),
                        expected: out.len() * x.len(),
                        got: w.rows * w.cols,
                    });
                }
                w.accumulate(x, out);
            }
            Ok(())
        };

        match cell {
            CellKind::Tanh => {
                let mut pre = vec![0.0; size];
                config.bias_into(&node.label, BiasRole::Tanh, &mut pre);
                gather(&|_| WeightRole::Tanh, &mut pre)?;
                hidden[idx] = pre.into_iter().map(f64::tanh).collect();
                cell_state[idx] = vec![0.0; size];
            }
            CellKind::MdLstm => {
                let mut z = vec![0.0; size];
                config.bias_into(&node.label, BiasRole::BlockInput, &mut z);
                gather(&|_| WeightRole::BlockInput, &mut z)?;
                let z: Vec<f64> = z.into_iter().map(f64::tanh).collect();

                let mut i_gate = vec![0.0; size];
                config.bias_into(&node.label, BiasRole::InputGate, &mut i_gate);
                gather(&|_| WeightRole::InputGate, &mut i_gate)?;
                let i_gate: Vec<f64> = i_gate.into_iter().map(logistic).collect();

                let mut o_gate = vec![0.0; size];
                config.bias_into(&node.label, BiasRole::OutputGate, &mut o_gate);
                gather(&|_| WeightRole::OutputGate, &mut o_gate)?;
                let o_gate: Vec<f64> = o_gate.into_iter().map(logistic).collect();

                let mut c = vec![0.0; size];
                for (a, (&i, &zv)) in c.iter_mut().zip(i_gate.iter().zip(&z)) {
                    *a = i * zv;
                }
                for &(guarded, src) in &in_edges {
                    let mut f = vec![config.forget_biases.get(&guarded).copied().unwrap_or(0.0); size];
                    gather(&|_| WeightRole::Forget(guarded), &mut f)?;
                    let f: Vec<f64> = f.into_iter().map(logistic).collect();
                    for ((a, &fv), &cv) in c.iter_mut().zip(&f).zip(&cell_state[src]) {
                        *a += fv * cv;
                    }
                }
                hidden[idx] = o_gate.iter().zip(&c).map(|(&o, &cv)| o * cv).collect();
                cell_state[idx] = c;
            }
        }
    }

    Ok(ExecutionTrace {
        hidden,
        cell_state: (cell == CellKind::MdLstm).then_some(cell_state),
    })
}

/// Path existence from input nodes at time `t` to output nodes at time
/// `t'`, for all `t, t'` in `[0, horizon]`.
pub fn reachability_matrix(window: &UnfoldedWindow, horizon: i64) -> Vec<Vec<bool>> {
    let span = (horizon + 1) as usize;
    let n = window.nodes().len();
    let mut matrix = vec![vec![false; span]; span];
    for t in 0..=horizon {
        let mut reached = vec![false; n];
        let mut queue: Vec<usize> = window
            .time_range(t)
            .filter(|&idx| window.nodes()[idx].kind == NodeKind::Input)
            .collect();
        for &idx in &queue {
            reached[idx] = true;
        }
        while let Some(v) = queue.pop() {
            let node = &window.nodes()[v];
            if node.kind == NodeKind::Output && (0..=horizon).contains(&node.time) {
                matrix[t as usize][node.time as usize] = true;
            }
            for &wi in window.outgoing(v) {
                let to = window.edges()[wi].to;
                if !reached[to] {
                    reached[to] = true;
                    queue.push(to);
                }
            }
        }
    }
    matrix
}

/// Finite-difference information flow: entry `(t, t')` is true when nudging
/// the input at time `t` moves some output at time `t'` by more than the
/// tolerance. With positive weights this equals [`reachability_matrix`].
pub fn sensitivity(
    graph: &CyclicGraph,
    config: &NetworkConfig,
    horizon: i64,
) -> Result<Vec<Vec<bool>>, ExecError> {
    const STEP: f64 = 1e-4;
    const TOLERANCE: f64 = 1e-9;

    let window = unfold(graph, 0, horizon + 1).expect("sensitivity window");
    let span = (horizon + 1) as usize;

    // modest positive baseline inputs keep tanh well away from saturation
    let mut rng = StdRng::seed_from_u64(config.seed ^ 0x5eed);
    let mut baseline: BTreeMap<i64, Vec<f64>> = BTreeMap::new();
    for idx in 0..window.nodes().len() {
        let node = &window.nodes()[idx];
        if node.kind == NodeKind::Input {
            let size = config.size_of(&node.label)?;
            baseline
                .entry(node.time)
                .or_insert_with(|| (0..size).map(|_| rng.gen_range(0.01..0.05)).collect());
        }
    }

    let mut matrix = vec![vec![false; span]; span];
    for t in 0..=horizon {
        if !baseline.contains_key(&t) {
            continue;
        }
        let mut plus = baseline.clone();
        let mut minus = baseline.clone();
        for v in plus.get_mut(&t).unwrap() {
            *v += STEP;
        }
        for v in minus.get_mut(&t).unwrap() {
            *v -= STEP;
        }
        let trace_plus = forward(&window, graph, config, &plus, CellKind::Tanh)?;
        let trace_minus = forward(&window, graph, config, &minus, CellKind::Tanh)?;
        for (idx, node) in window.nodes().iter().enumerate() {
            if node.kind != NodeKind::Output {
                continue;
            }
            let derivative = trace_plus.hidden[idx]
                .iter()
                .zip(&trace_minus.hidden[idx])
                .map(|(a, b)| (a - b).abs() / (2.0 * STEP))
                .fold(0.0f64, f64::max);
            if derivative > TOLERANCE {
                matrix[t as usize][node.time as usize] = true;
            }
        }
    }
    Ok(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archgraph::GraphBuilder;
    use crate::fixtures::{self, FixtureSpec};

    fn sh() -> CyclicGraph {
        fixtures::generate(&FixtureSpec::Sh).unwrap()
    }

    fn constant_inputs(window: &UnfoldedWindow, size: usize, value: f64) -> BTreeMap<i64, Vec<f64>> {
        let mut inputs = BTreeMap::new();
        for node in window.nodes() {
            if node.kind == NodeKind::Input {
                inputs.insert(node.time, vec![value; size]);
            }
        }
        inputs
    }

    #[test]
    fn zero_weights_give_zero_tanh_trace() {
        let g = sh();
        let mut config = NetworkConfig::seeded(&g, 3, 1, (0.1, 0.5), CellKind::Tanh);
        for ei in 0..g.edges().len() {
            config.set_weight(ei, WeightRole::Tanh, Matrix::zeros(3, 3));
        }
        let window = unfold(&g, 0, 4).unwrap();
        let inputs = constant_inputs(&window, 3, 0.7);
        let trace = forward(&window, &g, &config, &inputs, CellKind::Tanh).unwrap();
        for (idx, node) in window.nodes().iter().enumerate() {
            if node.kind != NodeKind::Input {
                assert!(trace.hidden[idx].iter().all(|&v| v == 0.0));
            }
        }
    }

    #[test]
    fn single_edge_is_tanh_of_weighted_input() {
        let g = sh();
        let mut config = NetworkConfig::seeded(&g, 1, 1, (0.1, 0.5), CellKind::Tanh);
        // x -> h carries weight 2, everything else zero
        for ei in 0..g.edges().len() {
            config.set_weight(ei, WeightRole::Tanh, Matrix::zeros(1, 1));
        }
        let x_to_h = g
            .edges()
            .iter()
            .position(|e| e.from.label == "x")
            .unwrap();
        config.set_weight(
            x_to_h,
            WeightRole::Tanh,
            Matrix {
                rows: 1,
                cols: 1,
                data: vec![2.0],
            },
        );
        let window = unfold(&g, 0, 1).unwrap();
        let inputs = BTreeMap::from([(0, vec![0.3])]);
        let trace = forward(&window, &g, &config, &inputs, CellKind::Tanh).unwrap();
        let h = window.node_index(0, "h").unwrap();
        assert!((trace.hidden[h][0] - (0.6f64).tanh()).abs() < 1e-15);
    }

    #[test]
    fn zero_lstm_is_identically_zero() {
        let g = sh();
        let mut config = NetworkConfig::seeded(&g, 2, 1, (0.1, 0.5), CellKind::MdLstm);
        let keys: Vec<(usize, WeightRole)> = (0..g.edges().len())
            .flat_map(|ei| {
                [
                    WeightRole::BlockInput,
                    WeightRole::InputGate,
                    WeightRole::OutputGate,
                ]
                .into_iter()
                .map(move |r| (ei, r))
            })
            .collect();
        for (ei, role) in keys {
            config.set_weight(ei, role, Matrix::zeros(2, 2));
        }
        for target_idx in 0..g.node_count() {
            for &t in g.incoming(target_idx) {
                for &s in g.incoming(target_idx) {
                    config.set_weight(s, WeightRole::Forget(t), Matrix::zeros(2, 2));
                }
            }
        }
        let window = unfold(&g, 0, 5).unwrap();
        let inputs = constant_inputs(&window, 2, 0.9);
        let trace = forward(&window, &g, &config, &inputs, CellKind::MdLstm).unwrap();
        let cells = trace.cell_state.unwrap();
        for (idx, node) in window.nodes().iter().enumerate() {
            if node.kind != NodeKind::Input {
                // sigmoid(0) = 1/2 but tanh(0) = 0, so z = 0 and c = 0
                assert!(trace.hidden[idx].iter().all(|&v| v == 0.0), "{node:?}");
                assert!(cells[idx].iter().all(|&v| v == 0.0));
            }
        }
    }

    #[test]
    fn traces_are_bitwise_deterministic() {
        let g = fixtures::generate(&FixtureSpec::Td).unwrap();
        let config = NetworkConfig::seeded(&g, 3, 7, (0.1, 0.5), CellKind::MdLstm);
        let window = unfold(&g, 0, 6).unwrap();
        let inputs = constant_inputs(&window, 3, 0.25);
        let a = forward(&window, &g, &config, &inputs, CellKind::MdLstm).unwrap();
        let b = forward(&window, &g, &config, &inputs, CellKind::MdLstm).unwrap();
        assert_eq!(a, b);
        let bits_a: Vec<u64> = a.hidden.iter().flatten().map(|v| v.to_bits()).collect();
        let bits_b: Vec<u64> = b.hidden.iter().flatten().map(|v| v.to_bits()).collect();
        assert_eq!(bits_a, bits_b);
    }

    #[test]
    fn missing_input_and_dimension_errors() {
        let g = sh();
        let config = NetworkConfig::seeded(&g, 2, 1, (0.1, 0.5), CellKind::Tanh);
        let window = unfold(&g, 0, 2).unwrap();
        let err = forward(&window, &g, &config, &BTreeMap::new(), CellKind::Tanh).unwrap_err();
        assert_eq!(err, ExecError::MissingInput { time: 0 });

        let inputs = BTreeMap::from([(0, vec![0.1; 5]), (1, vec![0.1; 5])]);
        let err = forward(&window, &g, &config, &inputs, CellKind::Tanh).unwrap_err();
        assert!(matches!(err, ExecError::DimensionMismatch { .. }));
    }

    #[test]
    fn extra_edge_with_floored_forget_gate_vanishes() {
        // adding a delayed self-loop whose weights are zero and whose forget
        // bias is -50 must leave the trace numerically unchanged
        let base = sh();
        let extended = GraphBuilder::new(1)
            .input("x", 0)
            .hidden("h", 0)
            .output("y", 0)
            .edge(("x", 0), ("h", 0), 0)
            .edge(("h", 0), ("h", 0), 1)
            .edge(("h", 0), ("h", 0), 2)
            .edge(("h", 0), ("y", 0), 0)
            .build()
            .unwrap();
        let size = 2;
        let base_config = NetworkConfig::seeded(&base, size, 11, (0.1, 0.5), CellKind::MdLstm);
        let mut ext_config =
            NetworkConfig::seeded(&extended, size, 999, (0.1, 0.5), CellKind::MdLstm);

        // copy the shared edges' weights from the base config and zero out
        // everything touching the extra edge
        let extra = extended
            .edges()
            .iter()
            .position(|e| e.from.label == "h" && e.sigma == 2)
            .unwrap();
        for role in [
            WeightRole::BlockInput,
            WeightRole::InputGate,
            WeightRole::OutputGate,
        ] {
            ext_config.set_weight(extra, role, Matrix::zeros(size, size));
        }
        for (bi, be) in base.edges().iter().enumerate() {
            let ei = extended
                .edges()
                .iter()
                .position(|e| e == be)
                .unwrap();
            for role in [
                WeightRole::BlockInput,
                WeightRole::InputGate,
                WeightRole::OutputGate,
            ] {
                ext_config.set_weight(ei, role, base_config.weight(bi, role).unwrap().clone());
            }
        }
        // forget weights among shared edges mirror the base; all pairs
        // involving the extra edge are zero
        let base_h = base.node_index(&crate::archgraph::NodeId::new("h", 0)).unwrap();
        let ext_h = extended
            .node_index(&crate::archgraph::NodeId::new("h", 0))
            .unwrap();
        let map_edge = |bi: usize| {
            extended
                .edges()
                .iter()
                .position(|e| e == base.edge(bi))
                .unwrap()
        };
        for &t in extended.incoming(ext_h) {
            for &s in extended.incoming(ext_h) {
                ext_config.set_weight(s, WeightRole::Forget(t), Matrix::zeros(size, size));
            }
        }
        for &bt in base.incoming(base_h) {
            for &bs in base.incoming(base_h) {
                ext_config.set_weight(
                    map_edge(bs),
                    WeightRole::Forget(map_edge(bt)),
                    base_config
                        .weight(bs, WeightRole::Forget(bt))
                        .unwrap()
                        .clone(),
                );
            }
        }
        // output node y: single incoming edge in both graphs
        let base_y_in = base.edges().iter().position(|e| e.to.label == "y").unwrap();
        let ext_y_in = map_edge(base_y_in);
        ext_config.set_weight(
            ext_y_in,
            WeightRole::Forget(ext_y_in),
            base_config
                .weight(base_y_in, WeightRole::Forget(base_y_in))
                .unwrap()
                .clone(),
        );
        ext_config.set_forget_bias(extra, -50.0);

        let horizon = 8;
        let w_base = unfold(&base, 0, horizon).unwrap();
        let w_ext = unfold(&extended, 0, horizon).unwrap();
        let inputs = constant_inputs(&w_base, size, 0.3);
        let t_base = forward(&w_base, &base, &base_config, &inputs, CellKind::MdLstm).unwrap();
        let t_ext = forward(&w_ext, &extended, &ext_config, &inputs, CellKind::MdLstm).unwrap();
        for (idx, node) in w_base.nodes().iter().enumerate() {
            let ext_idx = w_ext.node_index(node.time, &node.label).unwrap();
            for (a, b) in t_base.hidden[idx].iter().zip(&t_ext.hidden[ext_idx]) {
                assert!((a - b).abs() < 1e-12, "{node:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn sh_sensitivity_is_all_reachable() {
        let g = sh();
        let config = NetworkConfig::seeded(&g, 3, 5, (0.1, 0.5), CellKind::Tanh);
        let horizon = 10;
        let matrix = sensitivity(&g, &config, horizon).unwrap();
        for t in 0..=horizon as usize {
            for t2 in 0..=horizon as usize {
                assert_eq!(matrix[t][t2], t2 >= t, "({t}, {t2})");
            }
        }
    }

    #[test]
    fn sensitivity_matches_reachability_on_every_family() {
        for spec in fixtures::ALL_FAMILIES_SAMPLE {
            let g = fixtures::generate(spec).unwrap();
            let config = NetworkConfig::seeded(&g, 3, 11, (0.1, 0.5), CellKind::Tanh);
            let horizon = 12;
            let matrix = sensitivity(&g, &config, horizon).unwrap();
            let reach = reachability_matrix(&unfold(&g, 0, horizon + 1).unwrap(), horizon);
            assert_eq!(matrix, reach, "{spec:?}");
        }
    }

    #[test]
    fn disconnected_residues_have_no_flow() {
        // inputs exist only at even times, outputs only at odd times
        let g = GraphBuilder::new(2)
            .input("x", 0)
            .hidden("h", 0)
            .hidden("h", 1)
            .output("y", 1)
            .edge(("x", 0), ("h", 0), 0)
            .edge(("h", 0), ("h", 1), 1)
            .edge(("h", 1), ("h", 0), 1)
            .edge(("h", 1), ("y", 1), 0)
            .build()
            .unwrap();
        let config = NetworkConfig::seeded(&g, 2, 4, (0.1, 0.5), CellKind::Tanh);
        let horizon = 9;
        let matrix = sensitivity(&g, &config, horizon).unwrap();
        let reach = reachability_matrix(&unfold(&g, 0, horizon + 1).unwrap(), horizon);
        assert_eq!(matrix, reach);
        for t in 0..=horizon {
            for t2 in 0..=horizon {
                let expected = t % 2 == 0 && t2 % 2 == 1 && t2 > t;
                assert_eq!(matrix[t as usize][t2 as usize], expected, "({t}, {t2})");
            }
        }
    }

    #[test]
    fn skip_only_variant_flows_in_multiples_of_k() {
        let k = 5;
        let g = GraphBuilder::new(1)
            .input("x", 0)
            .hidden("h", 0)
            .output("y", 0)
            .edge(("x", 0), ("h", 0), 0)
            .edge(("h", 0), ("h", 0), k)
            .edge(("h", 0), ("y", 0), 0)
            .build()
            .unwrap();
        let config = NetworkConfig::seeded(&g, 2, 3, (0.1, 0.5), CellKind::Tanh);
        let horizon = 3 * k;
        let matrix = sensitivity(&g, &config, horizon).unwrap();
        let reach = reachability_matrix(&unfold(&g, 0, horizon + 1).unwrap(), horizon);
        assert_eq!(matrix, reach);
        for t in 0..=horizon {
            for t2 in 0..=horizon {
                let expected = t2 >= t && (t2 - t) % k == 0;
                assert_eq!(matrix[t as usize][t2 as usize], expected, "({t}, {t2})");
            }
        }
    }
}
