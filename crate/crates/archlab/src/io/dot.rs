//! DOT rendering of cyclic graphs and unfolded windows.
//!
//! Node shapes follow the usual pictorial convention: inputs are squares,
//! hidden nodes circles, outputs diamonds. In the cyclic rendering every
//! edge is labeled with its delay. When a measure report is supplied, the
//! witness max-ratio cycle is drawn red, the witness input-output path
//! yellow and the witness min-ratio cycle blue (red taking precedence over
//! yellow over blue when an edge appears in several witnesses).

use crate::archgraph::{CyclicGraph, Edge, NodeKind};
use crate::measures::MeasureReport;
use crate::unfold::UnfoldedWindow;

fn shape(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::Input => "box",
        NodeKind::Hidden => "circle",
        NodeKind::Output => "diamond",
    }
}

fn witness_color(report: Option<&MeasureReport>, edge: &Edge) -> Option<&'static str> {
    let report = report?;
    if report.witness_max_cycle.edges.contains(edge) {
        return Some("red");
    }
    if let Some(path) = &report.witness_io_path {
        if path.contains(edge) {
            return Some("yellow");
        }
    }
    if report.witness_min_cycle.edges.contains(edge) {
        return Some("blue");
    }
    None
}

/// Renders `graph` as DOT text. With a window, the unfolded slice is drawn
/// instead (time runs left to right, one rank per time step); the report
/// colors witness edges in either rendering.
pub fn export_dot(
    graph: &CyclicGraph,
    window: Option<&UnfoldedWindow>,
    report: Option<&MeasureReport>,
) -> Vec<u8> {
    match window {
        Some(w) => render_window(graph, w, report),
        None => render_cyclic(graph, report),
    }
    .into_bytes()
}

fn render_cyclic(graph: &CyclicGraph, report: Option<&MeasureReport>) -> String {
    let mut out = String::from("digraph architecture {\n  rankdir=LR;\n");
    for (id, kind) in graph.nodes() {
        out.push_str(&format!("  \"{id}\" [shape={}];\n", shape(*kind)));
    }
    for e in graph.edges() {
        let mut attrs = format!("label=\"{}\"", e.sigma);
        if let Some(color) = witness_color(report, e) {
            attrs.push_str(&format!(", color={color}, penwidth=2.0"));
        }
        out.push_str(&format!("  \"{}\" -> \"{}\" [{attrs}];\n", e.from, e.to));
    }
    out.push_str("}\n");
    out
}

fn render_window(
    graph: &CyclicGraph,
    window: &UnfoldedWindow,
    report: Option<&MeasureReport>,
) -> String {
    let mut out = String::from("digraph unfolded {\n  rankdir=LR;\n");
    let name = |idx: usize| {
        let n = &window.nodes()[idx];
        format!("{}@{}", n.label, n.time)
    };
    for time in window.t_lo..window.t_hi {
        let range = window.time_range(time);
        if range.is_empty() {
            continue;
        }
        out.push_str("  { rank=same;");
        for idx in range {
            out.push_str(&format!(" \"{}\";", name(idx)));
        }
        out.push_str(" }\n");
    }
    for (idx, node) in window.nodes().iter().enumerate() {
        out.push_str(&format!(
            "  \"{}\" [shape={}];\n",
            name(idx),
            shape(node.kind)
        ));
    }
    for e in window.edges() {
        let mut attrs = String::new();
        if let Some(color) = witness_color(report, graph.edge(e.cyclic_edge)) {
            attrs = format!(" [color={color}, penwidth=2.0]");
        }
        out.push_str(&format!(
            "  \"{}\" -> \"{}\"{attrs};\n",
            name(e.from),
            name(e.to)
        ));
    }
    out.push_str("}\n");
    out
}
