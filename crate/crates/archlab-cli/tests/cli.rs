//! End-to-end checks of the binary: exit codes, output shapes, and
//! agreement with direct library calls.

use std::path::PathBuf;
use std::process::{Command, Output};

use archlab::fixtures::{self, FixtureSpec};
use archlab::io::serialize;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_archlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> TempDir {
        let dir = std::env::temp_dir().join(format!(
            "archlab-cli-{tag}-{}",
            std::process::id()
        ));
        std::fs::create_dir_all(&dir).unwrap();
        TempDir(dir)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }

    fn write(&self, name: &str, bytes: &[u8]) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, bytes).unwrap();
        p
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn fixture_file(dir: &TempDir, name: &str, spec: FixtureSpec) -> PathBuf {
    let graph = fixtures::generate(&spec).unwrap();
    dir.write(name, &serialize(&graph))
}

#[test]
fn measures_table_contains_the_golden_values() {
    let dir = TempDir::new("measures");
    let td = fixture_file(&dir, "td.arch", FixtureSpec::Td);
    let out = run(&["measures", td.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("d_r"), "{text}");
    let row = |key: &str| {
        text.lines()
            .find(|l| l.starts_with(key))
            .unwrap_or_else(|| panic!("missing row {key} in {text}"))
            .split_whitespace()
            .last()
            .unwrap()
            .to_string()
    };
    assert_eq!(row("d_r"), "2");
    assert_eq!(row("d_f"), "3");
    assert_eq!(row("s "), "1");
}

#[test]
fn fixture_then_measures_json_round_trip() {
    let dir = TempDir::new("skip21");
    let arch = dir.path("s21.arch");
    let out = run(&[
        "fixture",
        "--family",
        "skip",
        "--k",
        "21",
        "-o",
        arch.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let out = run(&["measures", arch.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["skip_coefficient"], "21");
    assert_eq!(value["recurrent_depth"], "1");

    // thin-adapter check: identical to the direct library call
    let graph = fixtures::generate(&FixtureSpec::Skip { k: 21 }).unwrap();
    match archlab::measure(&graph).unwrap() {
        archlab::MeasureOutcome::Unidirectional(report) => {
            assert_eq!(
                value["skip_coefficient"].as_str().unwrap(),
                report.skip_coefficient.to_string()
            );
            assert_eq!(
                value["feedforward_depth"].as_str().unwrap(),
                report.feedforward_depth.unwrap().to_string()
            );
        }
        _ => unreachable!(),
    }
}

#[test]
fn validate_reports_condition_three_with_exit_one() {
    let dir = TempDir::new("invalid");
    let bad = dir.write(
        "bad.arch",
        b"version 1\nperiod 1\nnode input 0 x\nnode hidden 0 a\nnode hidden 0 b\n\
          node output 0 y\nedge x@0 -> a@0 : 0\nedge a@0 -> b@0 : 1\n\
          edge b@0 -> a@0 : -1\nedge b@0 -> y@0 : 0\n",
    );
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("CONDITION3"));

    let valid = fixture_file(&dir, "sh.arch", FixtureSpec::Sh);
    let out = run(&["validate", valid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "valid");
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let out = run(&["measures"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = TempDir::new("parse");
    let broken = dir.write("broken.arch", b"version 1\nperiod 1\nnode wat 0 x\n");
    let out = run(&["validate", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PARSE"));

    let out = run(&["measures", "/nonexistent/file.arch"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn measures_on_bidirectional_reports_components() {
    let dir = TempDir::new("bidi");
    let arch = fixture_file(&dir, "bidi.arch", FixtureSpec::Bidirectional);
    let out = run(&["measures", arch.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["components"].as_array().unwrap().len(), 2);

    // oracle runs need a single unidirectional report
    let out = run(&["converge", arch.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("BIDIRECTIONAL"));
}

#[test]
fn converge_certifies_the_fixture_slopes() {
    let dir = TempDir::new("converge");
    let td = fixture_file(&dir, "td.arch", FixtureSpec::Td);
    let out = run(&["converge", td.to_str().unwrap(), "--json", "--max-n", "48"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["convergence"]["slope_longest"], "2");
    assert_eq!(value["convergence"]["slope_shortest"], "1");
    assert_eq!(value["prop1"]["violations"], 0);
    assert_eq!(value["prop1"]["attained"], true);
    assert_eq!(value["periodicity"], true);
    assert_eq!(value["slopes_match"], true);
}

#[test]
fn unfold_summary_and_dot_output() {
    let dir = TempDir::new("unfold");
    let sh = fixture_file(&dir, "sh.arch", FixtureSpec::Sh);
    let dot = dir.path("sh.dot");
    let out = run(&[
        "unfold",
        sh.to_str().unwrap(),
        "--from",
        "0",
        "--to",
        "3",
        "--dot",
        dot.to_str().unwrap(),
        "--json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["nodes"].as_array().unwrap().len(), 9);
    assert_eq!(value["edges"].as_array().unwrap().len(), 8);
    assert_eq!(value["acyclic"], true);
    let dot_text = std::fs::read_to_string(&dot).unwrap();
    assert!(dot_text.starts_with("digraph unfolded {"));
}

#[test]
fn export_dot_with_measures_colors_witnesses() {
    let dir = TempDir::new("dot");
    let td = fixture_file(&dir, "td.arch", FixtureSpec::Td);
    let out = run(&["export-dot", td.to_str().unwrap(), "--measures"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.matches("color=red").count(), 2);
}

#[test]
fn exec_and_sensitivity_run_deterministically() {
    let dir = TempDir::new("exec");
    let td = fixture_file(&dir, "td.arch", FixtureSpec::Td);
    let args = [
        "exec",
        td.to_str().unwrap(),
        "--steps",
        "4",
        "--cell",
        "mdlstm",
        "--hidden",
        "2",
        "--seed",
        "9",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("c=["));

    let out = run(&[
        "sensitivity",
        td.to_str().unwrap(),
        "--horizon",
        "6",
        "--json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["matches_reachability"], true);
}

#[test]
fn cycle_budget_env_caps_enumeration() {
    let dir = TempDir::new("budget");
    let td = fixture_file(&dir, "td.arch", FixtureSpec::Td);
    let out = bin()
        .args(["measures", td.to_str().unwrap()])
        .env("ARCHLAB_CYCLE_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("BUDGET"));
}
