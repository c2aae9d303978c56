use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn polydots(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polydots")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polydots-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_turn_identity_passes() {
    let o = polydots(&["verify", "turn-identity", "--variant", "triangles", "--games", "500", "--width", "3", "--height", "3", "--seed", "7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["checked"], 500);
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);
    for key in ["theorem", "params", "checked", "violations", "elapsed_ms"] {
        assert!(report.get(key).is_some(), "{key}");
    }
}

#[test]
fn verify_reports_are_reproducible_across_thread_counts() {
    let args = ["verify", "engine-properties", "--games", "200", "--seed", "3", "--no-timing"];
    let a = polydots(&args);
    let mut more = vec!["--threads", "1"];
    more.extend(args);
    let b = polydots(&more);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unknown_theorem_and_bad_flags_fail() {
    assert!(!polydots(&["verify", "no-such-theorem"]).status.success());
    assert!(!polydots(&["solve", "--frobnicate"]).status.success());
    assert!(!polydots(&["solve", "--width", "1", "--height", "1"]).status.success());
    let listed = stdout(&polydots(&["verify", "list"]));
    assert!(listed.lines().any(|l| l == "convex-ers"));
}

#[test]
fn solve_prints_value_and_line() {
    let o = polydots(&["solve", "--width", "2", "--height", "2", "--variant", "triangles"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("value 0 halves"), "{text}");
    let line = text.lines().find(|l| l.starts_with("line ")).unwrap();
    assert!(line.split_whitespace().count() > 1);
}

#[test]
fn simulate_writes_identical_stats_for_identical_arguments() {
    let (a, b) = (scratch("a.json"), scratch("b.json"));
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let o = polydots(&[
            "--threads", threads, "simulate", "--games", "30", "--p1", "greedy", "--p2", "random", "--width", "3", "--height", "3",
            "--variant", "polygons", "--seed", "5", "--out", path.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let stats: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(stats["games"], 30);
    let total = stats["p1_wins"].as_u64().unwrap() + stats["p2_wins"].as_u64().unwrap() + stats["draws"].as_u64().unwrap();
    assert_eq!(total, 30);
    assert!(stats["mean_margin_halves"].is_number());
}

#[test]
fn enumeration_count_matches_the_library_and_sets_the_exit_code() {
    for k in [5usize, 6] {
        let o = polydots(&["enumerate", "ers", "--boundary-points", &k.to_string(), "--max-box", "6"]);
        let (shapes, _) = polydots::verify::convex_shapes(k, 6, true);
        let text = stdout(&o);
        assert!(text.starts_with(&format!("{} shapes", shapes.len())), "{text}");
        let report = polydots::verify::enumerate_convex_ers(k, 6);
        assert_eq!(o.status.success(), report.passed());
    }
}

#[test]
fn play_between_strategies_saves_a_record() {
    let path = scratch("game.json");
    let o = polydots(&[
        "play", "--width", "3", "--height", "3", "--variant", "triangles", "--p1", "greedy", "--p2", "random", "--record",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("game over"));
    let g = polydots::record::load_record(&std::fs::read(&path).unwrap()).unwrap();
    assert!(g.is_over());
}

#[test]
fn terminal_play_accepts_typed_moves() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_polydots"))
        .args(["play", "--width", "2", "--height", "2", "--p1", "human", "--p2", "human"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"0,0-1,0\n0,0-1,1\n1,0-1,1\n0,1-1,0\n?\nquit\n").unwrap();
    let out = child.wait_with_output().unwrap();
    let text = stdout(&out);
    assert!(out.status.success());
    assert!(text.contains("claimed 1/2"), "{text}");
    assert!(text.contains("rejected: conflict"), "{text}");
    assert!(text.contains("legal moves include"), "{text}");
}
