use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const GAP: &str = include_str!("fixtures/randomization_gap.json");

fn mechsynth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mechsynth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, contents).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn with_goal(goal: &str) -> String {
    GAP.replacen(
        "\"objective\": \"social_welfare\"",
        &format!("\"objective\": \"social_welfare\",\n  \"goal\": \"{goal}\""),
        1,
    )
}

#[test]
fn solve_reports_exact_optima() {
    let ws = Workspace::new();
    let setting = ws.file("gap.json", GAP);
    let out = mechsynth(&["solve", s(&setting), "--concept", "ds", "--kind", "det"]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "5"));
    let out = mechsynth(&["solve", s(&setting), "--concept", "ds", "--kind", "rand"]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "11/2"));
}

#[test]
fn solver_output_passes_its_own_check() {
    let ws = Workspace::new();
    let setting = ws.file("gap.json", GAP);
    for concept in ["ds", "bn"] {
        for kind in ["det", "rand"] {
            let mechanism = ws.path(&format!("{concept}-{kind}.json"));
            let out = mechsynth(&[
                "solve",
                s(&setting),
                "--concept",
                concept,
                "--kind",
                kind,
                "--output",
                s(&mechanism),
            ]);
            assert_eq!(code(&out), 0, "{}", stderr(&out));
            let written = fs::read_to_string(&mechanism).unwrap();
            assert!(written.contains(&format!("\"value\": \"{}\"", stdout(&out).trim())));
            let out = mechsynth(&["check", s(&setting), s(&mechanism), "--concept", concept]);
            assert_eq!((code(&out), stdout(&out).trim()), (0, "PASS"));
        }
    }
}

#[test]
fn decide_variants() {
    let ws = Workspace::new();
    let five = ws.file("five.json", &with_goal("5"));
    let half = ws.file("half.json", &with_goal("11/2"));
    let witness = ws.path("witness.json");

    let out = mechsynth(&["decide", s(&five), "--concept", "ds", "--kind", "det", "-o", s(&witness)]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "yes"));
    assert!(fs::read_to_string(&witness).unwrap().contains("\"t1,t1\": \"o2\""));

    let out = mechsynth(&["decide", s(&half), "--concept", "ds", "--kind", "det"]);
    assert_eq!((code(&out), stdout(&out).trim()), (1, "no"));

    let out = mechsynth(&["decide", s(&half), "--concept", "ds", "--kind", "rand"]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "yes"));
}

#[test]
fn decide_without_goal_is_an_input_error() {
    let ws = Workspace::new();
    let setting = ws.file("gap.json", GAP);
    let out = mechsynth(&["decide", s(&setting), "--concept", "ds"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("goal"));
}

#[test]
fn malformed_prior_names_the_agent() {
    let ws = Workspace::new();
    let setting = ws.file("bad.json", &GAP.replacen("\"t2\": \"1/2\"", "\"t2\": \"1/3\"", 1));
    let out = mechsynth(&["solve", s(&setting), "--concept", "ds"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("agent1"), "{}", stderr(&out));
}

#[test]
fn check_reports_witness() {
    let ws = Workspace::new();
    let setting = ws.file("gap.json", GAP);
    let mechanism = ws.file(
        "m.json",
        r#"{"schema_version": 1, "kind": "deterministic", "map": {"t1,t1": "o3", "t2,t1": "o1"}}"#,
    );
    let out = mechsynth(&["check", s(&setting), s(&mechanism), "--concept", "ds"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 1);
    assert!(text.starts_with("FAIL"));
    assert!(text.contains("agent: agent1"));
    assert!(text.contains("true type: t1"));
    assert!(text.contains("misreport: t2"));
    assert!(text.contains("context: t1"));
    assert!(text.contains("gain: 1\n"));

    let lifted = mechsynth(&["check", s(&setting), s(&mechanism), "--concept", "ds", "--as-randomized"]);
    assert_eq!(code(&lifted), 1);
    assert_eq!(stdout(&lifted), text);
}

#[test]
fn half_and_half_mixed_mechanism_passes() {
    let ws = Workspace::new();
    let setting = ws.file("gap.json", GAP);
    let mechanism = ws.file(
        "mixed.json",
        r#"{"schema_version": 1, "kind": "randomized",
            "map": {"t1,t1": {"o2": "1/2", "o3": "1/2"}, "t2,t1": {"o1": "1"}}}"#,
    );
    for concept in ["ds", "bn"] {
        let out = mechsynth(&["check", s(&setting), s(&mechanism), "--concept", concept]);
        assert_eq!((code(&out), stdout(&out).trim()), (0, "PASS"));
    }
}

#[test]
fn mechanism_shape_mismatch_is_an_input_error() {
    let ws = Workspace::new();
    let setting = ws.file("gap.json", GAP);
    let mechanism = ws.file(
        "m.json",
        r#"{"schema_version": 1, "kind": "deterministic", "map": {"t1,t1": "o3"}}"#,
    );
    let out = mechsynth(&["check", s(&setting), s(&mechanism), "--concept", "ds"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("t2,t1"));
}

#[test]
fn independent_set_round_trip() {
    let ws = Workspace::new();
    let graph = ws.file("p3.txt", "# path on three vertices\n3 2\n1 2\n2 3\n");
    let setting = ws.path("is.json");
    let meta = ws.path("is.meta.json");
    let out = mechsynth(&["reduce", "is", s(&graph), "--setting-out", s(&setting), "--meta-out", s(&meta)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "outcomes: 16\ngoal: 202/9\n");
    assert!(fs::read_to_string(&setting).unwrap().contains("\"goal\": \"202/9\""));

    let witness = ws.path("witness.json");
    let out = mechsynth(&["decide", s(&setting), "--concept", "ds", "--output", s(&witness)]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "yes"));
    let out = mechsynth(&["extract", s(&meta), s(&witness)]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "vertices: 1 3"));
}

#[test]
fn knapsack_round_trip() {
    let ws = Workspace::new();
    let instance = ws.file("k.txt", "2 3\n1 2\n2 3\n");
    let setting = ws.path("k.json");
    let meta = ws.path("k.meta.json");
    let out = mechsynth(&["reduce", "knapsack", s(&instance), "--setting-out", s(&setting), "--meta-out", s(&meta)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("goal: 18"));

    let witness = ws.path("witness.json");
    let out = mechsynth(&["decide", s(&setting), "--concept", "bn", "--output", s(&witness)]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "yes"));
    let out = mechsynth(&["extract", s(&meta), s(&witness)]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "items: 2"));
}

#[test]
fn zero_weight_item_is_rejected() {
    let ws = Workspace::new();
    let instance = ws.file("k.txt", "2 3\n0 5\n1 1\n");
    let out = mechsynth(&[
        "reduce",
        "knapsack",
        s(&instance),
        "--setting-out",
        s(&ws.path("a.json")),
        "--meta-out",
        s(&ws.path("b.json")),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("zero weight"));
}

#[test]
fn extract_rejects_kind_mismatch() {
    let ws = Workspace::new();
    let graph = ws.file("g.txt", "2 1\n");
    let instance = ws.file("k.txt", "1 1\n1 1\n");
    let (is_setting, is_meta) = (ws.path("is.json"), ws.path("is.meta.json"));
    let (k_setting, k_meta) = (ws.path("k.json"), ws.path("k.meta.json"));
    mechsynth(&["reduce", "is", s(&graph), "--setting-out", s(&is_setting), "--meta-out", s(&is_meta)]);
    mechsynth(&["reduce", "knapsack", s(&instance), "--setting-out", s(&k_setting), "--meta-out", s(&k_meta)]);
    let witness = ws.path("w.json");
    let out = mechsynth(&["solve", s(&is_setting), "--concept", "ds", "-o", s(&witness)]);
    assert_eq!(code(&out), 0);
    let out = mechsynth(&["extract", s(&k_meta), s(&witness)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn budget_exhaustion_exit_code() {
    let ws = Workspace::new();
    let graph = ws.file("p3.txt", "3 2\n1 2\n2 3\n");
    let setting = ws.path("is.json");
    let meta = ws.path("is.meta.json");
    mechsynth(&["reduce", "is", s(&graph), "--setting-out", s(&setting), "--meta-out", s(&meta)]);
    let out = mechsynth(&["solve", s(&setting), "--concept", "ds", "--budget", "1"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("budget"));
}

#[test]
fn export_lp_writes_text() {
    let ws = Workspace::new();
    let setting = ws.file("gap.json", GAP);
    let out = mechsynth(&["export-lp", s(&setting), "--concept", "ds"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("Maximize"));
    assert!(text.contains("obj: 1/2 p_0_0 + 1 p_0_1 + 2 p_0_2 + 4 p_1_0 + 1 p_1_1 + 2 p_1_2"));
    assert!(text.trim_end().ends_with("End"));
}

#[test]
fn demo_prints_both_optima() {
    let out = mechsynth(&["demo"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0);
    assert!(text.contains("deterministic optimum (dominant strategies): 5\n"));
    assert!(text.contains("  (t1,t1) -> o2\n  (t2,t1) -> o1\n"));
    assert!(text.contains("randomized optimum (dominant strategies): 11/2\n"));
    assert!(text.contains("o2: 1/2, o3: 1/2"));
}
