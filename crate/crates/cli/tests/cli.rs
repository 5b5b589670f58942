use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

const FORK: &str = r#"{"worlds": ["r", "x", "y"],
  "rel": [["r", "x"], ["r", "y"], ["x", "x"], ["y", "y"]],
  "val": {"p": ["x"]}}"#;

const XYZ: &str = r#"{"points": ["x", "y", "z"],
  "opens": [[], ["x", "y"], ["x", "y", "z"]],
  "val": {"p": ["x"]}}"#;

fn tangle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tangle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(dir: &TempDir, name: &str, text: &str) -> String {
    let path: PathBuf = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn fmt_canonicalises() {
    let o = tangle(&["fmt", "p -> (q -> r)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "p -> q -> r");
    let o = tangle(&["fmt", "<t>{q, p, q}"]);
    assert_eq!(stdout(&o).trim(), "<t>{p, q}");
}

#[test]
fn syntax_errors_are_usage_errors() {
    let o = tangle(&["fmt", "p &"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error"));
    assert_eq!(tangle(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn mc_lists_extension() {
    let dir = TempDir::new().unwrap();
    let fork = fixture(&dir, "fork.json", FORK);
    let o = tangle(&["mc", &fork, "mu q. (p | <> q)"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("r: true"));
    assert!(out.contains("y: false"));
    assert!(out.contains("extension: {r, x}"));

    assert_eq!(
        tangle(&["mc", &fork, "--world", "y", "<>p"]).status.code(),
        Some(1)
    );
    assert_eq!(
        tangle(&["mc", &fork, "--world", "r", "<>p"]).status.code(),
        Some(0)
    );
    let lasso = tangle(&["mc", &fork, "--lasso", "<t>{p}"]);
    assert!(stdout(&lasso).contains("extension: {r, x}"));
}

#[test]
fn structured_output_is_stable() {
    let dir = TempDir::new().unwrap();
    let fork = fixture(&dir, "fork.json", FORK);
    let a = stdout(&tangle(&["--format", "structured", "mc", &fork, "<>p"]));
    let b = stdout(&tangle(&["--format", "structured", "mc", &fork, "<>p"]));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["extension"], serde_json::json!(["r", "x"]));
}

#[test]
fn formula_file() {
    let dir = TempDir::new().unwrap();
    let path = fixture(&dir, "phi.txt", "<>p &\n  []q\n");
    let o = tangle(&["fmt", "--formula-file", &path]);
    assert_eq!(stdout(&o).trim(), "<>p & []q");
    assert_eq!(
        tangle(&["fmt", "--formula-file", &path, "p"]).status.code(),
        Some(2)
    );
}

#[test]
fn tmc_on_non_td_space() {
    let dir = TempDir::new().unwrap();
    let xyz = fixture(&dir, "xyz.json", XYZ);
    let o = tangle(&["tmc", &xyz, "<t>{p, <d>p}"]);
    assert!(stdout(&o).contains("extension: {x, y, z}"));
    let d = stdout(&tangle(&["translate", "--mode", "d", "<t>{p, <d>p}"]));
    let o = tangle(&["tmc", &xyz, "--point", "x", d.trim()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn translate_modes() {
    let out = |mode: &str, f: &str| {
        stdout(&tangle(&["translate", "--mode", mode, f]))
            .trim()
            .to_string()
    };
    assert_eq!(out("mu", "<t>{p}"), "nu _g0. <>(p & _g0)");
    assert_eq!(out("d", "[]p"), "p & [d]p");
    assert_eq!(out("star", "[]p"), "nu _g0. p & []_g0");
    assert_eq!(
        tangle(&["translate", "--mode", "star", "<t>{p}"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn analyze_reports_fork() {
    let dir = TempDir::new().unwrap();
    let fork = fixture(&dir, "fork.json", FORK);
    let o = tangle(&["analyze", &fork]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("locally-1-connected=false"));
    assert!(out.contains("locally-2-connected=true"));
    let v: serde_json::Value = serde_json::from_str(&stdout(&tangle(&[
        "--format",
        "structured",
        "analyze",
        &fork,
    ])))
    .unwrap();
    assert_eq!(v["clusters"][0]["rank"], 2);
    assert_eq!(v["clusters"][0]["degenerate"], true);
    assert!(stdout(&tangle(&["--format", "dot", "analyze", &fork])).starts_with("digraph"));
}

#[test]
fn validate_fork_counterexample() {
    let dir = TempDir::new().unwrap();
    let fork = fixture(&dir, "fork.json", FORK);
    let g1 = stdout(&tangle(&["axioms", "--schema", "G1", "--args", "p", "~p"]));
    let o = tangle(&[
        "--format",
        "structured",
        "validate",
        "--frame",
        &fork,
        g1.trim(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["world"], "r");
    let p = v["valuation"]["p"].as_array().unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!(
        tangle(&["validate", "--frame", &fork, "<>true"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn axioms_instantiate() {
    let o = tangle(&["axioms", "--schema", "Fix", "--args", "p"]);
    assert_eq!(stdout(&o).trim(), "<t>{p} -> <>(p & <t>{p})");
    assert_eq!(
        tangle(&["axioms", "--schema", "K", "--args", "p"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(tangle(&["axioms", "--schema", "Q"]).status.code(), Some(2));
    let listed = stdout(&tangle(&["axioms", "--profile", "KD4G1t.UC"]));
    for s in ["K:", "4:", "D:", "Fix:", "Ind:", "4t:", "U:", "C:", "G1:"] {
        assert!(listed.contains(s), "{s}");
    }
    assert!(!listed.contains("T:"));
}

#[test]
fn sat_outcomes() {
    let o = tangle(&[
        "--format",
        "structured",
        "sat",
        "--profile",
        "K4t",
        "--max",
        "2",
        "<t>{p, ~p}",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["model"]["val"]["p"], serde_json::json!(["w0"]));
    assert_eq!(v["model"]["rel"].as_array().unwrap().len(), 4);

    assert_eq!(
        tangle(&["sat", "--profile", "K4", "--max", "3", "<>true & []false"])
            .status
            .code(),
        Some(1)
    );
    let o = tangle(&[
        "sat",
        "--profile",
        "K",
        "--max",
        "8",
        "--budget",
        "1000",
        "<>true & []false",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(
        tangle(&["sat", "--profile", "K4", "<t>{p}"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tangle(&["sat", "--profile", "K9", "p"]).status.code(),
        Some(2)
    );
}

#[test]
fn filtrate_and_untangle_write_outputs() {
    let dir = TempDir::new().unwrap();
    let fork = fixture(&dir, "fork.json", FORK);
    let out = dir.path().join("q.json");
    let dot = dir.path().join("q");
    let o = tangle(&[
        "--format",
        "structured",
        "untangle",
        &fork,
        "<t>{p}",
        "--dia-top",
        "--refined",
        "--out",
        out.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        report["reduction"]["counterexample"],
        serde_json::Value::Null
    );
    assert_eq!(report["quotient_worlds"], 3);
    assert_eq!(report["preservation"]["path_components_equal"], true);
    let q: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(q["worlds"], serde_json::json!(["|r|", "|x|", "|y|"]));
    assert!(dir.path().join("q.r_phi.dot").exists());
    assert!(dir.path().join("q.r_t.dot").exists());

    let o = tangle(&["filtrate", &fork, "p"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3 worlds -> 2 classes"));
}

#[test]
fn figure3_fixture() {
    let o = tangle(&["fixture", "figure3", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["worlds"].as_array().unwrap().len(), 7);
    assert_eq!(v["val"]["r"], serde_json::json!(["b0", "b3"]));
}
