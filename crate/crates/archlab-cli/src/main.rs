//! Command-line front end for the architecture analyzer.
//!
//! Thin adapters over the library: every subcommand parses a graph file (or
//! generates a fixture), calls the corresponding library entry point and
//! formats the result, either as aligned tables or as JSON with `--json`.
//!
//! Exit codes: 0 on success, 1 on domain errors (invalid graph, enumeration
//! budget, bidirectional graph where a unidirectional one is required), 2 on
//! usage and file-parse errors.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use archlab::exec::{self, CellKind, NetworkConfig};
use archlab::fixtures::{self, FixtureSpec};
use archlab::io::{export_dot, parse, serialize};
use archlab::measures::{measure_with_budget, MeasureError, MeasureOutcome, MeasureReport};
use archlab::oracle;
use archlab::unfold::unfold;
use archlab::{CyclicGraph, NodeKind};

const CYCLE_BUDGET_ENV: &str = "ARCHLAB_CYCLE_BUDGET";

#[derive(Parser)]
#[command(
    name = "archlab",
    about = "Exact analysis of recurrent-network connecting architectures",
    version
)]
struct Cli {
    /// Emit machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for generated weights and inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the architecture-validity conditions and report violations.
    Validate { file: PathBuf },
    /// Compute recurrent depth, feedforward depth and skip coefficient.
    Measures { file: PathBuf },
    /// Materialize a window of the unfolded graph.
    Unfold {
        file: PathBuf,
        /// Window start (inclusive).
        #[arg(long = "from")]
        t_lo: i64,
        /// Window end (exclusive).
        #[arg(long = "to")]
        t_hi: i64,
        /// Write the window as DOT to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run the path-length oracle and certify convergence to the measures.
    Converge {
        file: PathBuf,
        /// Horizon; defaults to 64 * period * max(1, max |delay|).
        #[arg(long = "max-n")]
        max_n: Option<i64>,
    },
    /// Generate a named architecture family.
    Fixture(FixtureArgs),
    /// Run the reference executor over a window starting at time 0.
    Exec {
        file: PathBuf,
        /// Number of time steps to unfold.
        #[arg(long)]
        steps: i64,
        #[arg(long, value_enum, default_value_t = CellArg::Tanh)]
        cell: CellArg,
        /// State size for every label.
        #[arg(long, default_value_t = 3)]
        hidden: usize,
    },
    /// Compare finite-difference information flow with reachability.
    Sensitivity {
        file: PathBuf,
        #[arg(long, default_value_t = 24)]
        horizon: i64,
        #[arg(long, default_value_t = 3)]
        hidden: usize,
    },
    /// Render the cyclic graph as DOT.
    ExportDot {
        file: PathBuf,
        /// Color the witness cycles and path of the measure report.
        #[arg(long)]
        measures: bool,
        /// Output path; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FixtureArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Skip distance for the skip and stack-skip families.
    #[arg(long)]
    k: Option<i64>,
    /// Recurrent depth for the depth-grid family.
    #[arg(long)]
    dr: Option<i64>,
    /// Feedforward depth for the depth-grid family.
    #[arg(long)]
    df: Option<i64>,
    /// Variant 1..=4 for the stack-skip family.
    #[arg(long)]
    variant: Option<u8>,
    /// Where to write the architecture file.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Sh,
    St,
    Bu,
    Td,
    DepthGrid,
    Skip,
    StackSkip,
    NegativeSh,
    DoubledSh,
    Bidirectional,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CellArg {
    Tanh,
    Mdlstm,
}

impl From<CellArg> for CellKind {
    fn from(c: CellArg) -> CellKind {
        match c {
            CellArg::Tanh => CellKind::Tanh,
            CellArg::Mdlstm => CellKind::MdLstm,
        }
    }
}

/// A failure with a stable code and the exit status it maps to.
struct CliError {
    code: String,
    message: String,
    exit: u8,
    /// Diagnostics already written by the subcommand; main only sets the
    /// exit status.
    reported: bool,
}

impl CliError {
    fn domain(code: impl Into<String>, message: impl Display) -> CliError {
        CliError {
            code: code.into(),
            message: message.to_string(),
            exit: 1,
            reported: false,
        }
    }

    fn usage(code: impl Into<String>, message: impl Display) -> CliError {
        CliError {
            code: code.into(),
            message: message.to_string(),
            exit: 2,
            reported: false,
        }
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> CliError {
        let code = match &e {
            MeasureError::InvalidGraph(report) => report
                .violations
                .first()
                .map(|v| v.code().to_string())
                .unwrap_or_else(|| "INVALID".into()),
            MeasureError::BidirectionalGraph => "BIDIRECTIONAL".into(),
            MeasureError::BudgetExceeded(_) => "BUDGET".into(),
            MeasureError::NoInputOutputPath => "NO_IO_PATH".into(),
        };
        CliError::domain(code, e)
    }
}

impl From<oracle::OracleError> for CliError {
    fn from(e: oracle::OracleError) -> CliError {
        CliError::domain("ORACLE", e)
    }
}

impl From<exec::ExecError> for CliError {
    fn from(e: exec::ExecError) -> CliError {
        CliError::domain("EXEC", e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.reported {
                if cli.json {
                    let payload = json!({ "error": { "code": e.code, "message": e.message } });
                    println!("{}", serde_json::to_string_pretty(&payload).unwrap());
                } else {
                    eprintln!("error {}: {}", e.code, e.message);
                }
            }
            ExitCode::from(e.exit)
        }
    }
}

fn cycle_budget() -> usize {
    std::env::var(CYCLE_BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(archlab::DEFAULT_CYCLE_BUDGET)
}

fn load_graph(path: &Path) -> Result<CyclicGraph, CliError> {
    let bytes =
        fs::read(path).map_err(|e| CliError::usage("IO", format!("{}: {e}", path.display())))?;
    parse(&bytes).map_err(|e| CliError::usage("PARSE", format!("{}: {e}", path.display())))
}

fn write_out(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::usage("IO", format!("{}: {e}", path.display())))
}

/// Unidirectional whole-graph report, as required by the oracle and DOT
/// coloring.
fn whole_report(graph: &CyclicGraph) -> Result<MeasureReport, CliError> {
    match measure_with_budget(graph, cycle_budget())? {
        MeasureOutcome::Unidirectional(r) => Ok(r),
        MeasureOutcome::Bidirectional(_) => Err(CliError::domain(
            "BIDIRECTIONAL",
            "this command needs a unidirectional graph",
        )),
    }
}

struct Table {
    rows: Vec<(String, String)>,
}

impl Table {
    fn new() -> Table {
        Table { rows: Vec::new() }
    }

    fn row(&mut self, key: impl Into<String>, value: impl Display) -> &mut Table {
        self.rows.push((key.into(), value.to_string()));
        self
    }

    fn print(&self) {
        let width = self.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.rows {
            println!("{k:<width$}  {v}");
        }
    }
}

fn opt<T: Display>(value: &Option<T>) -> String {
    match value {
        Some(v) => v.to_string(),
        None => "-".into(),
    }
}

fn yes_no(v: bool) -> &'static str {
    if v {
        "yes"
    } else {
        "no"
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Validate { file } => cmd_validate(cli, file),
        Command::Measures { file } => cmd_measures(cli, file),
        Command::Unfold {
            file,
            t_lo,
            t_hi,
            dot,
        } => cmd_unfold(cli, file, *t_lo, *t_hi, dot.as_deref()),
        Command::Converge { file, max_n } => cmd_converge(cli, file, *max_n),
        Command::Fixture(args) => cmd_fixture(args),
        Command::Exec {
            file,
            steps,
            cell,
            hidden,
        } => cmd_exec(cli, file, *steps, (*cell).into(), *hidden),
        Command::Sensitivity {
            file,
            horizon,
            hidden,
        } => cmd_sensitivity(cli, file, *horizon, *hidden),
        Command::ExportDot {
            file,
            measures,
            out,
        } => cmd_export_dot(cli, file, *measures, out.as_deref()),
    }
}

fn cmd_validate(cli: &Cli, file: &Path) -> Result<(), CliError> {
    let graph = load_graph(file)?;
    let report = graph
        .validate_with_budget(cycle_budget())
        .map_err(|e| CliError::domain("BUDGET", e))?;
    if cli.json {
        let violations: Vec<_> = report
            .violations
            .iter()
            .map(|v| json!({ "code": v.code(), "detail": v.to_string() }))
            .collect();
        let payload = json!({ "valid": report.is_valid(), "violations": violations });
        println!("{}", serde_json::to_string_pretty(&payload).unwrap());
    } else if report.is_valid() {
        println!("valid");
    } else {
        for v in &report.violations {
            println!("error {}: {v}", v.code());
        }
    }
    if report.is_valid() {
        Ok(())
    } else {
        let code = report.violations[0].code();
        Err(CliError {
            code: code.into(),
            message: format!("{} violation(s)", report.violations.len()),
            exit: 1,
            reported: true,
        })
    }
}

fn measure_json(report: &MeasureReport) -> serde_json::Value {
    let witness_edges = |edges: &[archlab::Edge]| {
        edges
            .iter()
            .map(|e| {
                json!({
                    "from": e.from.to_string(),
                    "to": e.to.to_string(),
                    "sigma": e.sigma,
                })
            })
            .collect::<Vec<_>>()
    };
    json!({
        "orientation": report.orientation.to_string(),
        "minimal_period": report.minimal_period,
        "recurrent_depth": report.recurrent_depth.to_string(),
        "feedforward_depth": report.feedforward_depth.map(|r| r.to_string()),
        "skip_reciprocal": report.skip_reciprocal.to_string(),
        "skip_coefficient": report.skip_coefficient.to_string(),
        "witness_max_cycle": witness_edges(&report.witness_max_cycle.edges),
        "witness_min_cycle": witness_edges(&report.witness_min_cycle.edges),
        "witness_io_path": report.witness_io_path.as_deref().map(witness_edges),
        "mild_assumption_dr": report.mild_assumption_dr,
        "mild_assumption_s": report.mild_assumption_s,
    })
}

fn path_display(edges: &[archlab::Edge]) -> String {
    let mut out = String::new();
    for (i, e) in edges.iter().enumerate() {
        if i == 0 {
            out.push_str(&e.from.to_string());
        }
        out.push_str(&format!(" -({})-> {}", e.sigma, e.to));
    }
    out
}

fn measure_table(graph: &CyclicGraph, report: &MeasureReport) -> Table {
    let mut t = Table::new();
    t.row("orientation", report.orientation)
        .row("period", graph.period())
        .row("minimal period", report.minimal_period)
        .row("d_r", report.recurrent_depth)
        .row("d_f", opt(&report.feedforward_depth))
        .row("s", report.skip_coefficient)
        .row("j", report.skip_reciprocal)
        .row("mild (d_r)", yes_no(report.mild_assumption_dr))
        .row("mild (s)", yes_no(report.mild_assumption_s))
        .row(
            "witness max cycle",
            path_display(&report.witness_max_cycle.edges),
        )
        .row(
            "witness min cycle",
            path_display(&report.witness_min_cycle.edges),
        )
        .row(
            "witness io path",
            match &report.witness_io_path {
                Some(p) => path_display(p),
                None => "-".into(),
            },
        );
    t
}

fn cmd_measures(cli: &Cli, file: &Path) -> Result<(), CliError> {
    let graph = load_graph(file)?;
    match measure_with_budget(&graph, cycle_budget())? {
        MeasureOutcome::Unidirectional(report) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&measure_json(&report)).unwrap()
                );
            } else {
                measure_table(&graph, &report).print();
            }
        }
        MeasureOutcome::Bidirectional(components) => {
            if cli.json {
                let payload = json!({
                    "components": components
                        .iter()
                        .map(|c| json!({
                            "members": c.component.iter().map(|n| n.to_string()).collect::<Vec<_>>(),
                            "measures": measure_json(&c.report),
                        }))
                        .collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            } else {
                println!("bidirectional graph: one report per component");
                for (i, c) in components.iter().enumerate() {
                    let members: Vec<String> = c.component.iter().map(|n| n.to_string()).collect();
                    println!("\ncomponent {} ({})", i + 1, members.join(", "));
                    measure_table(&graph, &c.report).print();
                }
            }
        }
    }
    Ok(())
}

fn cmd_unfold(
    cli: &Cli,
    file: &Path,
    t_lo: i64,
    t_hi: i64,
    dot: Option<&Path>,
) -> Result<(), CliError> {
    let graph = load_graph(file)?;
    let window = unfold(&graph, t_lo, t_hi).map_err(|e| CliError::domain("WINDOW", e))?;
    if let Some(path) = dot {
        write_out(path, &export_dot(&graph, Some(&window), None))?;
    }
    if cli.json {
        let payload = json!({
            "t_lo": window.t_lo,
            "t_hi": window.t_hi,
            "acyclic": window.is_dag(),
            "nodes": window
                .nodes()
                .iter()
                .map(|n| format!("{}@{}", n.label, n.time))
                .collect::<Vec<_>>(),
            "edges": window
                .edges()
                .iter()
                .map(|e| {
                    let from = &window.nodes()[e.from];
                    let to = &window.nodes()[e.to];
                    json!({
                        "from": format!("{}@{}", from.label, from.time),
                        "to": format!("{}@{}", to.label, to.time),
                    })
                })
                .collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&payload).unwrap());
    } else {
        let mut t = Table::new();
        t.row("window", format!("[{}, {})", window.t_lo, window.t_hi))
            .row("nodes", window.nodes().len())
            .row("edges", window.edges().len())
            .row("acyclic", yes_no(window.is_dag()));
        t.print();
    }
    Ok(())
}

fn cmd_converge(cli: &Cli, file: &Path, max_n: Option<i64>) -> Result<(), CliError> {
    let graph = load_graph(file)?;
    let report = whole_report(&graph)?;
    let n_max = max_n.unwrap_or_else(|| oracle::default_n_max(&graph));
    let conv = oracle::convergence(&graph, &report, n_max)?;
    let (violations, attained) = match report.feedforward_depth {
        Some(_) => oracle::prop1_bound_check(&graph, &report, n_max)?,
        None => (0, false),
    };
    let periodic = oracle::periodicity_check(&graph, n_max.min(40))?;

    if cli.json {
        let payload = json!({
            "measures": measure_json(&report),
            "n_max": n_max,
            "convergence": {
                "slope_longest": conv.slope_longest.to_string(),
                "slope_shortest": conv.slope_shortest.to_string(),
                "affine_onset": conv.affine_onset,
                "period_q": conv.period_q,
                "df_max": conv.df_max.map(|r| r.to_string()),
                "bound_violations": conv.bound_violations,
                "limsup_subsequence": conv.limsup_subsequence,
            },
            "prop1": { "violations": violations, "attained": attained },
            "periodicity": periodic,
            "slopes_match": conv.slope_longest == report.recurrent_depth
                && conv.slope_shortest == report.skip_reciprocal,
        });
        println!("{}", serde_json::to_string_pretty(&payload).unwrap());
    } else {
        let mut t = Table::new();
        t.row("n_max", n_max)
            .row("d_r", report.recurrent_depth)
            .row("slope longest", conv.slope_longest)
            .row("j", report.skip_reciprocal)
            .row("slope shortest", conv.slope_shortest)
            .row("d_f", opt(&report.feedforward_depth))
            .row("df max", opt(&conv.df_max))
            .row("affine onset", conv.affine_onset)
            .row("period Q", conv.period_q)
            .row("bound violations", conv.bound_violations)
            .row("bound attained", yes_no(attained))
            .row("periodicity", yes_no(periodic))
            .row("subsequence semantics", yes_no(conv.limsup_subsequence));
        t.print();
    }
    Ok(())
}

fn cmd_fixture(args: &FixtureArgs) -> Result<(), CliError> {
    let need = |value: Option<i64>, flag: &str| {
        value.ok_or_else(|| CliError::usage("PARAMS", format!("this family requires {flag}")))
    };
    let spec = match args.family {
        FamilyArg::Sh => FixtureSpec::Sh,
        FamilyArg::St => FixtureSpec::St,
        FamilyArg::Bu => FixtureSpec::Bu,
        FamilyArg::Td => FixtureSpec::Td,
        FamilyArg::DepthGrid => FixtureSpec::DepthGrid {
            recurrent: need(args.dr, "--dr")?,
            feedforward: need(args.df, "--df")?,
        },
        FamilyArg::Skip => FixtureSpec::Skip {
            k: need(args.k, "--k")?,
        },
        FamilyArg::StackSkip => FixtureSpec::StackSkip {
            variant: args
                .variant
                .ok_or_else(|| CliError::usage("PARAMS", "stack-skip requires --variant"))?,
            k: need(args.k, "--k")?,
        },
        FamilyArg::NegativeSh => FixtureSpec::NegativeSh,
        FamilyArg::DoubledSh => FixtureSpec::DoubledSh,
        FamilyArg::Bidirectional => FixtureSpec::Bidirectional,
    };
    let graph = fixtures::generate(&spec).map_err(|e| CliError::usage("PARAMS", e))?;
    write_out(&args.out, &serialize(&graph))
}

fn cmd_exec(
    cli: &Cli,
    file: &Path,
    steps: i64,
    cell: CellKind,
    hidden: usize,
) -> Result<(), CliError> {
    let graph = load_graph(file)?;
    if steps < 1 {
        return Err(CliError::usage("PARAMS", "--steps must be at least 1"));
    }
    let window = unfold(&graph, 0, steps).map_err(|e| CliError::domain("WINDOW", e))?;
    let config = NetworkConfig::seeded(&graph, hidden, cli.seed, (0.1, 0.5), cell);
    let mut rng = StdRng::seed_from_u64(cli.seed);
    let mut inputs: BTreeMap<i64, Vec<f64>> = BTreeMap::new();
    for node in window.nodes() {
        if node.kind == NodeKind::Input {
            inputs
                .entry(node.time)
                .or_insert_with(|| (0..hidden).map(|_| rng.gen_range(0.0..1.0)).collect());
        }
    }
    let trace = exec::forward(&window, &graph, &config, &inputs, cell)?;

    let fmt_vec = |v: &[f64]| {
        let inner: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
        format!("[{}]", inner.join(", "))
    };
    let order = window
        .topo_order()
        .ok_or_else(|| CliError::domain("WINDOW", "window is not acyclic"))?;
    if cli.json {
        let states: Vec<_> = order
            .iter()
            .map(|&idx| {
                let n = &window.nodes()[idx];
                json!({
                    "node": format!("{}@{}", n.label, n.time),
                    "h": trace.hidden[idx],
                    "c": trace.cell_state.as_ref().map(|c| c[idx].clone()),
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({ "states": states })).unwrap()
        );
    } else {
        for &idx in order {
            let n = &window.nodes()[idx];
            let mut line = format!("{}@{}  h={}", n.label, n.time, fmt_vec(&trace.hidden[idx]));
            if let Some(cells) = &trace.cell_state {
                line.push_str(&format!("  c={}", fmt_vec(&cells[idx])));
            }
            println!("{line}");
        }
    }
    Ok(())
}

fn cmd_sensitivity(cli: &Cli, file: &Path, horizon: i64, hidden: usize) -> Result<(), CliError> {
    let graph = load_graph(file)?;
    let config = NetworkConfig::seeded(&graph, hidden, cli.seed, (0.1, 0.5), CellKind::Tanh);
    let matrix = exec::sensitivity(&graph, &config, horizon)?;
    let window = unfold(&graph, 0, horizon + 1).map_err(|e| CliError::domain("WINDOW", e))?;
    let reach = exec::reachability_matrix(&window, horizon);
    let matches = matrix == reach;

    if cli.json {
        let payload = json!({
            "horizon": horizon,
            "matrix": matrix,
            "matches_reachability": matches,
        });
        println!("{}", serde_json::to_string_pretty(&payload).unwrap());
    } else {
        println!("sensitivity (rows: input time, columns: output time)");
        for row in &matrix {
            let line: String = row.iter().map(|&b| if b { '1' } else { '0' }).collect();
            println!("{line}");
        }
        println!("matches reachability: {}", yes_no(matches));
    }
    Ok(())
}

fn cmd_export_dot(
    cli: &Cli,
    file: &Path,
    measures: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let graph = load_graph(file)?;
    let report = if measures {
        Some(whole_report(&graph)?)
    } else {
        None
    };
    let dot = export_dot(&graph, None, report.as_ref());
    match out {
        Some(path) => write_out(path, &dot)?,
        None => print!("{}", String::from_utf8_lossy(&dot)),
    }
    let _ = cli;
    Ok(())
}
