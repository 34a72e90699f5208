//! Closed-form architecture complexity measures.
//!
//! All three measures are extremal ratios over the graph's simple cycles and
//! simple input-output paths, computed as exact rationals with concrete
//! witnesses:
//!
//! * recurrent depth `d_r`: maximum of `length / |delay sum|` over simple
//!   cycles — the asymptotic number of transformations per time step along
//!   the slowest recurrent route;
//! * feedforward depth `d_f`: maximum of `length - delay_sum * d_r` over
//!   simple input-output paths — the short-run input-to-output budget;
//! * skip reciprocal `j` and skip coefficient `s = 1/j`: minimum cycle ratio
//!   and its reciprocal — time steps skipped per transformation along the
//!   fastest route.
//!
//! Extending the maximum (minimum) from simple cycles to arbitrary closed
//! walks is sound because a closed walk's ratio is a mediant of its cycle
//! decomposition's ratios; inserting a cycle into an io path changes the
//! feedforward objective by `length - delay_sum * d_r <= 0`, so simple paths
//! suffice there as well. Negative-orientation graphs are handled by time
//! reversal: `|delay|` replaces the delay in every ratio.

use serde::Serialize;
use thiserror::Error;

use crate::archgraph::{
    CycleBudgetExceeded, CyclicGraph, Edge, NodeId, NodeKind, Orientation, SimpleCycle,
    ValidationReport, DEFAULT_CYCLE_BUDGET,
};
use crate::rational::Rational;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("graph violates validity conditions ({} violations)", .0.violations.len())]
    InvalidGraph(ValidationReport),
    #[error("measures are defined per unidirectional component; graph is bidirectional")]
    BidirectionalGraph,
    #[error(transparent)]
    BudgetExceeded(#[from] CycleBudgetExceeded),
    #[error("no directed path from an input node to an output node")]
    NoInputOutputPath,
}

/// Full measure set for one unidirectional graph (or component).
#[derive(Debug, Clone, Serialize)]
pub struct MeasureReport {
    pub orientation: Orientation,
    pub minimal_period: i64,
    pub recurrent_depth: Rational,
    /// Absent when the graph (or component) has no input-output path.
    pub feedforward_depth: Option<Rational>,
    pub skip_reciprocal: Rational,
    pub skip_coefficient: Rational,
    pub witness_max_cycle: SimpleCycle,
    pub witness_min_cycle: SimpleCycle,
    pub witness_io_path: Option<Vec<Edge>>,
    /// True when the max-ratio witness path visits every time step once
    /// unfolded, which upgrades the asymptotic limsup to a plain limit.
    pub mild_assumption_dr: bool,
    pub mild_assumption_s: bool,
}

/// Measures of one strongly connected component of a bidirectional graph.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    /// The component's members, in canonical order.
    pub component: Vec<NodeId>,
    pub report: MeasureReport,
}

/// What [`measure`] returns: bidirectional graphs get one report per
/// cycle-carrying strongly connected component.
#[derive(Debug, Clone)]
pub enum MeasureOutcome {
    Unidirectional(MeasureReport),
    Bidirectional(Vec<ComponentReport>),
}

/// Recurrent depth with its witness cycle.
pub fn recurrent_depth(graph: &CyclicGraph) -> Result<(Rational, SimpleCycle), MeasureError> {
    let ctx = Context::build(graph, DEFAULT_CYCLE_BUDGET)?;
    let (ratio, cycle) = ctx.max_ratio_cycle(&ctx.cycles);
    Ok((ratio, cycle.clone()))
}

/// Feedforward depth with its witness path; `d_r` must come from
/// [`recurrent_depth`] on the same graph.
pub fn feedforward_depth(
    graph: &CyclicGraph,
    d_r: Rational,
) -> Result<(Rational, Vec<Edge>), MeasureError> {
    let ctx = Context::build(graph, DEFAULT_CYCLE_BUDGET)?;
    match ctx.best_io_path(d_r, |_| true, |idx| ctx.graph.kind(idx) == NodeKind::Input)? {
        Some((value, path)) => Ok((value, path)),
        None => Err(MeasureError::NoInputOutputPath),
    }
}

/// Skip reciprocal `j`, skip coefficient `s = 1/j`, and the witness cycle.
pub fn skip_coefficient(
    graph: &CyclicGraph,
) -> Result<(Rational, Rational, SimpleCycle), MeasureError> {
    let ctx = Context::build(graph, DEFAULT_CYCLE_BUDGET)?;
    let (j, cycle) = ctx.min_ratio_cycle(&ctx.cycles);
    Ok((j, j.recip(), cycle.clone()))
}

/// True when the cycle's running delay-prefix sums cover every residue
/// modulo `|delay sum|`, so the unfolded path of the repeated cycle visits a
/// node at every time step.
pub fn check_mild_assumption(cycle: &SimpleCycle) -> bool {
    let span = cycle.sigma_sum.unsigned_abs() as i64;
    if span == 0 {
        return false;
    }
    let mut seen = vec![false; span as usize];
    let mut prefix = 0i64;
    seen[0] = true;
    for edge in &cycle.edges {
        prefix += edge.sigma;
        seen[prefix.rem_euclid(span) as usize] = true;
    }
    seen.iter().all(|&s| s)
}

/// Aggregate measure computation with the default enumeration budget.
pub fn measure(graph: &CyclicGraph) -> Result<MeasureOutcome, MeasureError> {
    measure_with_budget(graph, DEFAULT_CYCLE_BUDGET)
}

pub fn measure_with_budget(
    graph: &CyclicGraph,
    budget: usize,
) -> Result<MeasureOutcome, MeasureError> {
    let report = graph.validate_with_budget(budget)?;
    if !report.is_valid() {
        return Err(MeasureError::InvalidGraph(report));
    }
    let cycles = graph.simple_cycles_with_budget(budget)?;
    let orientation = orientation_of(&cycles);
    let minimal_period = graph.minimal_period();

    if orientation != Orientation::Bidirectional {
        let ctx = Context {
            graph,
            cycles,
            orientation,
            budget,
        };
        return Ok(MeasureOutcome::Unidirectional(ctx.report(
            minimal_period,
            |_| true,
            |idx| graph.kind(idx) == NodeKind::Input,
        )?));
    }

    // per-component reports: each cycle-carrying strongly connected
    // component is unidirectional on its own (validity forbids mixed signs
    // within one component)
    let scc = graph.scc_ids();
    let mut component_ids: Vec<usize> = cycles
        .iter()
        .map(|c| scc[graph.node_index(&c.edges[0].from).expect("cycle node")])
        .collect();
    component_ids.sort_unstable();
    component_ids.dedup();
    // order components by their smallest member
    component_ids.sort_by_key(|&cid| {
        (0..graph.node_count())
            .find(|&idx| scc[idx] == cid)
            .expect("nonempty component")
    });

    let mut reports = Vec::new();
    for cid in component_ids {
        let members: Vec<usize> = (0..graph.node_count())
            .filter(|&idx| scc[idx] == cid)
            .collect();
        let in_component = |idx: usize| scc[idx] == cid;
        let component_cycles: Vec<SimpleCycle> = cycles
            .iter()
            .filter(|c| in_component(graph.node_index(&c.edges[0].from).unwrap()))
            .cloned()
            .collect();
        let ctx = Context {
            graph,
            orientation: orientation_of(&component_cycles),
            cycles: component_cycles,
            budget,
        };
        // the component's subgraph: its own nodes plus adjacent io ports
        let edge_filter = |ei: usize| {
            let (from, to) = graph.edge_endpoints(ei);
            (in_component(from) && in_component(to))
                || (graph.kind(from) == NodeKind::Input && in_component(to))
                || (in_component(from) && graph.kind(to) == NodeKind::Output)
        };
        let start_filter = |idx: usize| {
            graph.kind(idx) == NodeKind::Input
                && graph
                    .outgoing(idx)
                    .iter()
                    .any(|&ei| in_component(graph.edge_endpoints(ei).1))
        };
        let report = ctx.report(minimal_period, edge_filter, start_filter)?;
        reports.push(ComponentReport {
            component: members.iter().map(|&i| graph.node_id(i).clone()).collect(),
            report,
        });
    }
    Ok(MeasureOutcome::Bidirectional(reports))
}

fn orientation_of(cycles: &[SimpleCycle]) -> Orientation {
    let any_pos = cycles.iter().any(|c| c.sigma_sum > 0);
    let any_nonpos = cycles.iter().any(|c| c.sigma_sum <= 0);
    if any_pos && any_nonpos {
        Orientation::Bidirectional
    } else if any_pos {
        Orientation::Positive
    } else {
        Orientation::Negative
    }
}

/// Shared state for one measure computation over a validated graph.
struct Context<'g> {
    graph: &'g CyclicGraph,
    cycles: Vec<SimpleCycle>,
    orientation: Orientation,
    budget: usize,
}

impl<'g> Context<'g> {
    fn build(graph: &'g CyclicGraph, budget: usize) -> Result<Self, MeasureError> {
        let report = graph.validate_with_budget(budget)?;
        if !report.is_valid() {
            return Err(MeasureError::InvalidGraph(report));
        }
        let cycles = graph.simple_cycles_with_budget(budget)?;
        let orientation = orientation_of(&cycles);
        if orientation == Orientation::Bidirectional {
            return Err(MeasureError::BidirectionalGraph);
        }
        Ok(Context {
            graph,
            cycles,
            orientation,
            budget,
        })
    }

    /// +1 for positive orientation, -1 for negative (time reversal).
    fn sign(&self) -> i64 {
        match self.orientation {
            Orientation::Negative => -1,
            _ => 1,
        }
    }

    fn ratio(&self, cycle: &SimpleCycle) -> Rational {
        Rational::new(cycle.length as i64, self.sign() * cycle.sigma_sum)
    }

    fn max_ratio_cycle<'c>(&self, cycles: &'c [SimpleCycle]) -> (Rational, &'c SimpleCycle) {
        let mut best: Option<(Rational, &SimpleCycle)> = None;
        for cycle in cycles {
            let r = self.ratio(cycle);
            if best.is_none_or(|(b, _)| r > b) {
                best = Some((r, cycle));
            }
        }
        best.expect("validated graph has at least one cycle")
    }

    fn min_ratio_cycle<'c>(&self, cycles: &'c [SimpleCycle]) -> (Rational, &'c SimpleCycle) {
        let mut best: Option<(Rational, &SimpleCycle)> = None;
        for cycle in cycles {
            let r = self.ratio(cycle);
            if best.is_none_or(|(b, _)| r < b) {
                best = Some((r, cycle));
            }
        }
        best.expect("validated graph has at least one cycle")
    }

    /// Maximum of `length - sign*delay_sum*d_r` over simple input-output
    /// paths passing the edge filter, with the first witness attaining it.
    fn best_io_path(
        &self,
        d_r: Rational,
        allowed_edge: impl Fn(usize) -> bool,
        start: impl Fn(usize) -> bool,
    ) -> Result<Option<(Rational, Vec<Edge>)>, MeasureError> {
        let graph = self.graph;
        let sign = self.sign();
        let mut visited = vec![false; graph.node_count()];
        let mut best: Option<(Rational, Vec<usize>)> = None;
        let mut emitted = 0usize;

        struct Dfs<'a, F: Fn(usize) -> bool> {
            graph: &'a CyclicGraph,
            allowed: F,
            sign: i64,
            d_r: Rational,
            budget: usize,
        }
        impl<F: Fn(usize) -> bool> Dfs<'_, F> {
            fn run(
                &self,
                node: usize,
                visited: &mut [bool],
                path: &mut Vec<usize>,
                sigma: i64,
                best: &mut Option<(Rational, Vec<usize>)>,
                emitted: &mut usize,
            ) -> Result<(), CycleBudgetExceeded> {
                for &ei in self.graph.outgoing(node) {
                    if !(self.allowed)(ei) {
                        continue;
                    }
                    let (_, to) = self.graph.edge_endpoints(ei);
                    if visited[to] {
                        continue;
                    }
                    let edge_sigma = self.graph.edge(ei).sigma;
                    path.push(ei);
                    if self.graph.kind(to) == NodeKind::Output {
                        *emitted += 1;
                        if *emitted > self.budget {
                            return Err(CycleBudgetExceeded {
                                budget: self.budget,
                            });
                        }
                        let objective = Rational::integer(path.len() as i64)
                            - Rational::integer(self.sign * (sigma + edge_sigma)) * self.d_r;
                        if best.as_ref().is_none_or(|(b, _)| objective > *b) {
                            *best = Some((objective, path.clone()));
                        }
                    } else {
                        visited[to] = true;
                        self.run(to, visited, path, sigma + edge_sigma, best, emitted)?;
                        visited[to] = false;
                    }
                    path.pop();
                }
                Ok(())
            }
        }

        let dfs = Dfs {
            graph,
            allowed: allowed_edge,
            sign,
            d_r,
            budget: self.budget,
        };
        for idx in 0..graph.node_count() {
            if graph.kind(idx) != NodeKind::Input || !start(idx) {
                continue;
            }
            visited[idx] = true;
            let mut path = Vec::new();
            dfs.run(idx, &mut visited, &mut path, 0, &mut best, &mut emitted)?;
            visited[idx] = false;
        }
        Ok(best.map(|(value, path)| {
            (
                value,
                path.into_iter().map(|ei| graph.edge(ei).clone()).collect(),
            )
        }))
    }

    fn report(
        &self,
        minimal_period: i64,
        allowed_edge: impl Fn(usize) -> bool,
        start: impl Fn(usize) -> bool,
    ) -> Result<MeasureReport, MeasureError> {
        let (d_r, max_cycle) = self.max_ratio_cycle(&self.cycles);
        let (j, min_cycle) = self.min_ratio_cycle(&self.cycles);
        let io = self.best_io_path(d_r, allowed_edge, start)?;
        let (feedforward_depth, witness_io_path) = match io {
            Some((value, path)) => (Some(value), Some(path)),
            None => (None, None),
        };
        Ok(MeasureReport {
            orientation: self.orientation,
            minimal_period,
            recurrent_depth: d_r,
            feedforward_depth,
            skip_reciprocal: j,
            skip_coefficient: j.recip(),
            witness_max_cycle: max_cycle.clone(),
            witness_min_cycle: min_cycle.clone(),
            witness_io_path,
            mild_assumption_dr: check_mild_assumption(max_cycle),
            mild_assumption_s: check_mild_assumption(min_cycle),
        })
    }
}

impl MeasureOutcome {
    /// The single report of a unidirectional graph; panics on bidirectional
    /// outcomes (use pattern matching when both are possible).
    pub fn unwrap_unidirectional(self) -> MeasureReport {
        match self {
            MeasureOutcome::Unidirectional(r) => r,
            MeasureOutcome::Bidirectional(_) => {
                panic!("expected a unidirectional measure outcome")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archgraph::GraphBuilder;
    use crate::fixtures::{self, FixtureSpec};

    fn fixture(spec: FixtureSpec) -> CyclicGraph {
        fixtures::generate(&spec).unwrap()
    }

    fn whole_report(spec: FixtureSpec) -> MeasureReport {
        measure(&fixture(spec)).unwrap().unwrap_unidirectional()
    }

    #[test]
    fn recurrent_depth_examples() {
        let (dr, witness) = recurrent_depth(&fixture(FixtureSpec::Sh)).unwrap();
        assert_eq!(dr, Rational::ONE);
        assert_eq!(witness.length, 1);

        let (dr, witness) = recurrent_depth(&fixture(FixtureSpec::Td)).unwrap();
        assert_eq!(dr, Rational::integer(2));
        assert_eq!((witness.length, witness.sigma_sum), (2, 1));

        // single self-loop crossing two steps
        let g = GraphBuilder::new(1)
            .input("x", 0)
            .hidden("h", 0)
            .output("y", 0)
            .edge(("x", 0), ("h", 0), 0)
            .edge(("h", 0), ("h", 0), 2)
            .edge(("h", 0), ("y", 0), 0)
            .build()
            .unwrap();
        let (dr, _) = recurrent_depth(&g).unwrap();
        assert_eq!(dr, Rational::new(1, 2));
    }

    #[test]
    fn feedforward_depth_examples() {
        let report = whole_report(FixtureSpec::Sh);
        assert_eq!(report.feedforward_depth, Some(Rational::integer(2)));
        let report = whole_report(FixtureSpec::St);
        assert_eq!(report.feedforward_depth, Some(Rational::integer(3)));

        // extra delayed input edge does not change the maximum
        let g = GraphBuilder::new(1)
            .input("x", 0)
            .hidden("h", 0)
            .output("y", 0)
            .edge(("x", 0), ("h", 0), 0)
            .edge(("x", 0), ("h", 0), 1)
            .edge(("h", 0), ("h", 0), 1)
            .edge(("h", 0), ("y", 0), 0)
            .build()
            .unwrap();
        let (dr, _) = recurrent_depth(&g).unwrap();
        let (df, witness) = feedforward_depth(&g, dr).unwrap();
        assert_eq!(df, Rational::integer(2));
        assert_eq!(witness.len(), 2);
        assert_eq!(witness[0].sigma, 0);
    }

    #[test]
    fn skip_coefficient_examples() {
        let report = whole_report(FixtureSpec::Sh);
        assert_eq!(report.skip_coefficient, Rational::ONE);

        let (j, s, witness) = skip_coefficient(&fixture(FixtureSpec::Skip { k: 21 })).unwrap();
        assert_eq!(j, Rational::new(1, 21));
        assert_eq!(s, Rational::integer(21));
        assert_eq!(witness.sigma_sum, 21);

        let (_, s, _) = skip_coefficient(&fixture(FixtureSpec::StackSkip { variant: 3, k: 9 }))
            .unwrap();
        assert_eq!(s, Rational::new(9, 2));
    }

    #[test]
    fn mild_assumption_examples() {
        let report = whole_report(FixtureSpec::Sh);
        assert!(report.mild_assumption_dr);
        assert!(report.mild_assumption_s);

        let skip = whole_report(FixtureSpec::Skip { k: 2 });
        // min witness is the 2-step self-loop: every other time step skipped
        assert_eq!(skip.witness_min_cycle.sigma_sum, 2);
        assert!(!skip.mild_assumption_s);
        assert!(skip.mild_assumption_dr);

        let td = whole_report(FixtureSpec::Td);
        assert!(td.mild_assumption_dr);
    }

    #[test]
    fn aggregate_reports() {
        let td = whole_report(FixtureSpec::Td);
        assert_eq!(td.recurrent_depth, Rational::integer(2));
        assert_eq!(td.feedforward_depth, Some(Rational::integer(3)));
        assert_eq!(td.skip_coefficient, Rational::ONE);
        assert_eq!(td.minimal_period, 1);

        let grid = whole_report(FixtureSpec::DepthGrid {
            recurrent: 3,
            feedforward: 4,
        });
        assert_eq!(grid.recurrent_depth, Rational::integer(3));
        assert_eq!(grid.feedforward_depth, Some(Rational::integer(4)));
    }

    #[test]
    fn witnesses_attain_their_ratios() {
        for spec in fixtures::ALL_FAMILIES_SAMPLE {
            let outcome = measure(&fixture(*spec)).unwrap();
            let reports = match outcome {
                MeasureOutcome::Unidirectional(r) => vec![r],
                MeasureOutcome::Bidirectional(rs) => {
                    rs.into_iter().map(|c| c.report).collect()
                }
            };
            for r in reports {
                let max = &r.witness_max_cycle;
                assert_eq!(
                    Rational::new(max.length as i64, max.sigma_sum.abs()),
                    r.recurrent_depth
                );
                let min = &r.witness_min_cycle;
                assert_eq!(
                    Rational::new(min.length as i64, min.sigma_sum.abs()),
                    r.skip_reciprocal
                );
                assert!(r.recurrent_depth >= r.skip_reciprocal);
                assert!(r.skip_coefficient * r.recurrent_depth >= Rational::ONE);
            }
        }
    }

    #[test]
    fn negative_orientation_uses_absolute_delays() {
        let report = whole_report(FixtureSpec::NegativeSh);
        assert_eq!(report.orientation, Orientation::Negative);
        assert_eq!(report.recurrent_depth, Rational::ONE);
        assert_eq!(report.skip_coefficient, Rational::ONE);
        assert_eq!(report.feedforward_depth, Some(Rational::integer(2)));
    }

    #[test]
    fn bidirectional_graph_reports_per_component() {
        let g = fixture(FixtureSpec::Bidirectional);
        assert!(matches!(
            recurrent_depth(&g),
            Err(MeasureError::BidirectionalGraph)
        ));
        let outcome = measure(&g).unwrap();
        let components = match outcome {
            MeasureOutcome::Bidirectional(cs) => cs,
            _ => panic!("expected bidirectional outcome"),
        };
        assert_eq!(components.len(), 2);
        let h1 = &components[0];
        assert_eq!(h1.component.len(), 1);
        assert_eq!(h1.report.orientation, Orientation::Positive);
        assert_eq!(h1.report.recurrent_depth, Rational::ONE);
        // h1's component sees the input port but no output edge
        assert_eq!(h1.report.feedforward_depth, None);
        let h2 = &components[1];
        assert_eq!(h2.report.orientation, Orientation::Negative);
        // x is not adjacent to h2's component, so no io path either
        assert_eq!(h2.report.feedforward_depth, None);
    }

    #[test]
    fn bidirectional_component_with_io_path_gets_feedforward_depth() {
        // x -> a (positive loop) -> y, plus a separate negative component
        // x -> b (negative loop) -> y; both components see both ports
        let g = GraphBuilder::new(1)
            .input("x", 0)
            .hidden("a", 0)
            .hidden("b", 0)
            .output("y", 0)
            .edge(("x", 0), ("a", 0), 0)
            .edge(("a", 0), ("a", 0), 1)
            .edge(("a", 0), ("y", 0), 0)
            .edge(("x", 0), ("b", 0), 0)
            .edge(("b", 0), ("b", 0), -1)
            .edge(("b", 0), ("y", 0), 0)
            .build()
            .unwrap();
        let components = match measure(&g).unwrap() {
            MeasureOutcome::Bidirectional(cs) => cs,
            _ => panic!("expected bidirectional outcome"),
        };
        assert_eq!(components.len(), 2);
        for c in &components {
            assert_eq!(c.report.feedforward_depth, Some(Rational::integer(2)));
        }
    }

    #[test]
    fn invalid_graphs_are_rejected() {
        let g = GraphBuilder::new(1)
            .input("x", 0)
            .hidden("a", 0)
            .hidden("b", 0)
            .output("y", 0)
            .edge(("x", 0), ("a", 0), 0)
            .edge(("a", 0), ("b", 0), 1)
            .edge(("b", 0), ("a", 0), -1)
            .edge(("b", 0), ("y", 0), 0)
            .build()
            .unwrap();
        assert!(matches!(
            measure(&g),
            Err(MeasureError::InvalidGraph(_))
        ));
    }

    #[test]
    fn feedforward_depth_is_invariant_under_relabeling() {
        let base = fixture(FixtureSpec::Td);
        // swap labels so canonical orders differ
        let relabeled = GraphBuilder::new(1)
            .input("zz_in", 0)
            .hidden("b", 0)
            .hidden("a", 0)
            .output("aa_out", 0)
            .edge(("zz_in", 0), ("b", 0), 0)
            .edge(("b", 0), ("b", 0), 1)
            .edge(("b", 0), ("a", 0), 0)
            .edge(("a", 0), ("a", 0), 1)
            .edge(("a", 0), ("b", 0), 1)
            .edge(("a", 0), ("aa_out", 0), 0)
            .build()
            .unwrap();
        let r1 = measure(&base).unwrap().unwrap_unidirectional();
        let r2 = measure(&relabeled).unwrap().unwrap_unidirectional();
        assert_eq!(r1.feedforward_depth, r2.feedforward_depth);
        assert_eq!(r1.recurrent_depth, r2.recurrent_depth);
        assert_eq!(r1.skip_coefficient, r2.skip_coefficient);
    }

    #[test]
    fn mediant_bound_on_random_closed_walks() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};

        let params = fixtures::RandomGraphParams::default();
        for seed in 0..60u64 {
            let g = fixtures::random_valid_graph(seed, &params);
            let outcome = measure(&g).unwrap();
            let report = match outcome {
                MeasureOutcome::Unidirectional(r) => r,
                MeasureOutcome::Bidirectional(_) => continue,
            };
            let scc = g.scc_ids();
            let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
            // random walk within one component until it returns to its start
            let start = g
                .node_index(&report.witness_max_cycle.edges[0].from)
                .unwrap();
            let comp = scc[start];
            let mut node = start;
            let mut length = 0i64;
            let mut sigma = 0i64;
            for _ in 0..400 {
                let choices: Vec<usize> = g
                    .outgoing(node)
                    .iter()
                    .copied()
                    .filter(|&ei| scc[g.edge_endpoints(ei).1] == comp)
                    .collect();
                let ei = choices[rng.gen_range(0..choices.len())];
                length += 1;
                sigma += g.edge(ei).sigma;
                node = g.edge_endpoints(ei).1;
                if node == start {
                    let ratio = Rational::new(length, sigma.abs());
                    assert!(ratio <= report.recurrent_depth, "seed {seed}");
                    assert!(ratio >= report.skip_reciprocal, "seed {seed}");
                    // closed-walk sign matches the orientation
                    assert_eq!(
                        sigma.signum(),
                        if report.orientation == Orientation::Negative {
                            -1
                        } else {
                            1
                        },
                        "seed {seed}"
                    );
                    length = 0;
                    sigma = 0;
                }
            }
        }
    }
}
