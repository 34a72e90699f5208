//! Exact graph-theoretic analysis of recurrent-network connecting
//! architectures.
//!
//! A recurrent architecture is modelled as a finite weighted directed
//! multigraph with time-indexed, typed nodes ([`CyclicGraph`]); integer edge
//! delays say how many time steps each connection crosses once the graph is
//! unfolded. On top of that model the crate provides:
//!
//! * validation of the defining conditions ([`archgraph`]),
//! * finite windows of the unfolded DAG ([`unfold`]),
//! * the three complexity measures — recurrent depth, feedforward depth and
//!   recurrent skip coefficient — as exact rationals with witness cycles and
//!   paths ([`measures`]),
//! * a brute-force dynamic-programming oracle over unfolded windows that
//!   cross-checks every closed form ([`oracle`]),
//! * generators for the standard architecture families ([`fixtures`]),
//! * a reference forward executor with tanh and multidimensional-LSTM cells
//!   ([`exec`]),
//! * a canonical text format and DOT export ([`io`]).

pub mod archgraph;
pub mod exec;
pub mod fixtures;
pub mod io;
pub mod measures;
pub mod oracle;
pub mod rational;
pub mod unfold;

pub use archgraph::{
    CycleBudgetExceeded, CyclicGraph, Edge, GraphBuildError, GraphBuilder, NodeId, NodeKind,
    Orientation, SimpleCycle, ValidationReport, Violation, DEFAULT_CYCLE_BUDGET,
};
pub use measures::{measure, ComponentReport, MeasureError, MeasureOutcome, MeasureReport};
pub use rational::Rational;
pub use unfold::{unfold, UnfoldedNode, UnfoldedWindow};
