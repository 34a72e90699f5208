//! Deterministic generators for the architecture families used as golden
//! tests, plus a seeded generator of random valid graphs for property
//! sweeps.
//!
//! Every generated graph passes validation, and each family has known exact
//! measure values (asserted by the acceptance suite).

pub mod random;

pub use random::{random_valid_graph, RandomGraphParams};

use thiserror::Error;

use crate::archgraph::{CyclicGraph, GraphBuilder};

/// A parameterized architecture family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureSpec {
    /// Single recurrent layer: `x -> h -> y` with a unit-delay self-loop.
    Sh,
    /// Two stacked recurrent layers.
    St,
    /// Stacked layers plus a delayed bottom-up connection.
    Bu,
    /// Stacked layers plus a delayed top-down connection.
    Td,
    /// Canonical wiring with recurrent depth `recurrent` and feedforward
    /// depth `feedforward`.
    DepthGrid { recurrent: i64, feedforward: i64 },
    /// `Sh` with an extra self-loop crossing `k` time steps.
    Skip { k: i64 },
    /// `St` with one extra `k`-step connection; the four variants place it
    /// differently and end up with very different skip coefficients.
    StackSkip { variant: u8, k: i64 },
    /// `Sh` with the recurrence running backwards in time.
    NegativeSh,
    /// `Sh` duplicated over a declared period of 2; minimal period stays 1.
    DoubledSh,
    /// Two single-cycle components of opposite sign.
    Bidirectional,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvalidFixtureParams {
    #[error("skip distance k must be at least 2, got {0}")]
    SkipTooSmall(i64),
    #[error("stack-skip variant must be 1..=4, got {0}")]
    UnknownVariant(u8),
    #[error("depth grid needs recurrent depth >= 1 and feedforward depth >= 2, got ({0}, {1})")]
    DepthOutOfRange(i64, i64),
}

/// A representative spec per family, for sweep-style tests.
pub const ALL_FAMILIES_SAMPLE: &[FixtureSpec] = &[
    FixtureSpec::Sh,
    FixtureSpec::St,
    FixtureSpec::Bu,
    FixtureSpec::Td,
    FixtureSpec::DepthGrid {
        recurrent: 2,
        feedforward: 3,
    },
    FixtureSpec::Skip { k: 5 },
    FixtureSpec::StackSkip { variant: 3, k: 5 },
    FixtureSpec::NegativeSh,
    FixtureSpec::DoubledSh,
    FixtureSpec::Bidirectional,
];

fn stacked() -> GraphBuilder {
    GraphBuilder::new(1)
        .input("x", 0)
        .hidden("h1", 0)
        .hidden("h2", 0)
        .output("y", 0)
        .edge(("x", 0), ("h1", 0), 0)
        .edge(("h1", 0), ("h1", 0), 1)
        .edge(("h1", 0), ("h2", 0), 0)
        .edge(("h2", 0), ("h2", 0), 1)
        .edge(("h2", 0), ("y", 0), 0)
}

/// Builds the canonical wiring for `spec`.
pub fn generate(spec: &FixtureSpec) -> Result<CyclicGraph, InvalidFixtureParams> {
    let builder = match *spec {
        FixtureSpec::Sh => GraphBuilder::new(1)
            .input("x", 0)
            .hidden("h", 0)
            .output("y", 0)
            .edge(("x", 0), ("h", 0), 0)
            .edge(("h", 0), ("h", 0), 1)
            .edge(("h", 0), ("y", 0), 0),
        FixtureSpec::St => stacked(),
        FixtureSpec::Bu => stacked().edge(("h1", 0), ("h2", 0), 1),
        FixtureSpec::Td => stacked().edge(("h2", 0), ("h1", 0), 1),
        FixtureSpec::DepthGrid {
            recurrent,
            feedforward,
        } => {
            if recurrent < 1 || feedforward < 2 {
                return Err(InvalidFixtureParams::DepthOutOfRange(recurrent, feedforward));
            }
            // chain of `feedforward` edges from input to output, plus a
            // `recurrent`-edge cycle of total delay 1 through the first
            // hidden node
            let mut b = GraphBuilder::new(1).input("x", 0).output("y", 0);
            let chain: Vec<String> = (1..feedforward).map(|i| format!("h{i}")).collect();
            for label in &chain {
                b = b.hidden(label, 0);
            }
            b = b.edge(("x", 0), (&chain[0], 0), 0);
            for pair in chain.windows(2) {
                b = b.edge((&pair[0], 0), (&pair[1], 0), 0);
            }
            b = b.edge((chain.last().unwrap(), 0), ("y", 0), 0);
            if recurrent == 1 {
                b = b.edge((&chain[0], 0), (&chain[0], 0), 1);
            } else {
                let ring: Vec<String> = (1..recurrent).map(|i| format!("c{i}")).collect();
                for label in &ring {
                    b = b.hidden(label, 0);
                }
                b = b.edge((&chain[0], 0), (&ring[0], 0), 0);
                for pair in ring.windows(2) {
                    b = b.edge((&pair[0], 0), (&pair[1], 0), 0);
                }
                b = b.edge((ring.last().unwrap(), 0), (&chain[0], 0), 1);
            }
            b
        }
        FixtureSpec::Skip { k } => {
            if k < 2 {
                return Err(InvalidFixtureParams::SkipTooSmall(k));
            }
            GraphBuilder::new(1)
                .input("x", 0)
                .hidden("h", 0)
                .output("y", 0)
                .edge(("x", 0), ("h", 0), 0)
                .edge(("h", 0), ("h", 0), 1)
                .edge(("h", 0), ("h", 0), k)
                .edge(("h", 0), ("y", 0), 0)
        }
        FixtureSpec::StackSkip { variant, k } => {
            if k < 2 {
                return Err(InvalidFixtureParams::SkipTooSmall(k));
            }
            match variant {
                1 => stacked(),
                2 => stacked().edge(("h1", 0), ("h2", 0), k),
                3 => stacked().edge(("h2", 0), ("h1", 0), k),
                4 => stacked().edge(("h2", 0), ("h2", 0), k),
                v => return Err(InvalidFixtureParams::UnknownVariant(v)),
            }
        }
        FixtureSpec::NegativeSh => GraphBuilder::new(1)
            .input("x", 0)
            .hidden("h", 0)
            .output("y", 0)
            .edge(("x", 0), ("h", 0), 0)
            .edge(("h", 0), ("h", 0), -1)
            .edge(("h", 0), ("y", 0), 0),
        FixtureSpec::DoubledSh => {
            let mut b = GraphBuilder::new(2);
            for t in 0..2 {
                b = b
                    .input("x", t)
                    .hidden("h", t)
                    .output("y", t)
                    .edge(("x", t), ("h", t), 0)
                    .edge(("h", t), ("y", t), 0);
            }
            b.edge(("h", 0), ("h", 1), 1).edge(("h", 1), ("h", 0), 1)
        }
        FixtureSpec::Bidirectional => GraphBuilder::new(1)
            .input("x", 0)
            .hidden("h1", 0)
            .hidden("h2", 0)
            .output("y", 0)
            .edge(("x", 0), ("h1", 0), 0)
            .edge(("h1", 0), ("h1", 0), 1)
            .edge(("h1", 0), ("h2", 0), 0)
            .edge(("h2", 0), ("h2", 0), -1)
            .edge(("h2", 0), ("y", 0), 0),
    };
    Ok(builder.build().expect("fixture wiring is well-formed"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archgraph::Orientation;

    #[test]
    fn every_family_generates_a_valid_graph() {
        for spec in ALL_FAMILIES_SAMPLE {
            let g = generate(spec).unwrap();
            let report = g.validate().unwrap();
            assert!(report.is_valid(), "{spec:?}: {:?}", report.violations);
        }
    }

    #[test]
    fn orientations_match_family_declarations() {
        for spec in ALL_FAMILIES_SAMPLE {
            let g = generate(spec).unwrap();
            let expected = match spec {
                FixtureSpec::NegativeSh => Orientation::Negative,
                FixtureSpec::Bidirectional => Orientation::Bidirectional,
                _ => Orientation::Positive,
            };
            assert_eq!(g.orientation().unwrap(), expected, "{spec:?}");
        }
    }

    #[test]
    fn parameter_validation() {
        assert_eq!(
            generate(&FixtureSpec::Skip { k: 1 }).unwrap_err(),
            InvalidFixtureParams::SkipTooSmall(1)
        );
        assert_eq!(
            generate(&FixtureSpec::StackSkip { variant: 5, k: 5 }).unwrap_err(),
            InvalidFixtureParams::UnknownVariant(5)
        );
        assert_eq!(
            generate(&FixtureSpec::DepthGrid {
                recurrent: 0,
                feedforward: 2
            })
            .unwrap_err(),
            InvalidFixtureParams::DepthOutOfRange(0, 2)
        );
    }

    #[test]
    fn depth_grid_counts_nodes_and_edges() {
        let g = generate(&FixtureSpec::DepthGrid {
            recurrent: 3,
            feedforward: 4,
        })
        .unwrap();
        // x, y, h1..h3 chain, c1..c2 ring
        assert_eq!(g.node_count(), 7);
        // 4 chain edges + 3 ring edges
        assert_eq!(g.edges().len(), 7);
    }
}
