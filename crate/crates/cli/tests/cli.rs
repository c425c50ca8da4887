//! End-to-end checks of the `div` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use div_core::tiling::{div_equivalent, div_from_json};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_div"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("div-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn spectrum_prints_published_values() {
    let dir = tmpdir("spectrum");
    let out = run_in(&dir, &["spectrum", "--paper-fixtures", "left"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    for needle in ["0.225377", "2.185885", "3.360409", "4.228328", "rank 6 of 7, trace 12"] {
        assert!(stdout.contains(needle), "missing {needle} in {stdout}");
    }
    assert!(dir.join("spectrum.csv").exists());
}

#[test]
fn build_prints_chain_action_table() {
    let dir = tmpdir("build");
    let out = run_in(
        &dir,
        &["build", "--words", "e,a,ba,cba", "--tile", "equilateral"],
    );
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("a               2 1 3 4"));
    assert!(stdout.contains("b               1 3 2 4"));
    assert!(stdout.contains("c               1 2 4 3"));
}

#[test]
fn build_export_build_round_trip() {
    let dir = tmpdir("roundtrip");
    let out = run_in(
        &dir,
        &[
            "build",
            "--words",
            "e,c,bc,abc",
            "--tile",
            "scalene",
            "--out",
            "first.json",
        ],
    );
    assert!(out.status.success());
    let out = run_in(
        &dir,
        &["export", "--div", "first.json", "--json", "second.json", "--svg", "v.svg", "--dot", "g.dot"],
    );
    assert!(out.status.success());
    let d1 = div_from_json(&std::fs::read_to_string(dir.join("first.json")).unwrap()).unwrap();
    let d2 = div_from_json(&std::fs::read_to_string(dir.join("second.json")).unwrap()).unwrap();
    assert!(div_equivalent(&d1, &d2).unwrap().is_some());
    assert!(std::fs::read_to_string(dir.join("g.dot")).unwrap().contains("graph"));
}

#[test]
fn classify_single_copy() {
    let dir = tmpdir("classify1");
    let out = run_in(&dir, &["classify", "--n", "1"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("1 volumes up to equivalence, 1 graph classes"));
}

#[test]
fn enumerate_then_pairs() {
    let dir = tmpdir("pairs");
    let out = run_in(
        &dir,
        &["enumerate", "--tile", "scalene", "--n", "2", "--out", "c2.json"],
    );
    assert!(out.status.success());
    let out = run_in(
        &dir,
        &["pairs", "--census", "c2.json", "--tol", "1e-8", "--out", "p2.json"],
    );
    assert!(out.status.success());
    let pairs: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("p2.json")).unwrap()).unwrap();
    // two-copy volumes differ in external side counts: no candidate pairs
    assert_eq!(pairs["pairs"].as_array().unwrap().len(), 0);
}

#[test]
fn transplant_fixture_pair_passes() {
    let dir = tmpdir("transplant");
    let out = run_in(
        &dir,
        &["transplant", "--paper-fixtures", "--refine", "2", "--k", "4", "--report", "r.json"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("r.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
    assert_eq!(report["side_map"]["source"], "builtin");
}

#[test]
fn usage_errors_exit_2() {
    let out = bin().arg("no-such-command").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["spectrum"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1)); // runtime error: no input chosen
}

#[test]
fn custom_tile_file_is_accepted() {
    let dir = tmpdir("tilefile");
    std::fs::write(
        dir.join("tile.json"),
        r#"{"format_version":1,"vertices":[[0,0],[1.1,0],[0.4,0.8]],"side_labels":["a","b","c"]}"#,
    )
    .unwrap();
    let out = run_in(
        &dir,
        &["build", "--words", "e,b", "--tile", "tile.json", "--out", "two.json"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let div = div_from_json(&std::fs::read_to_string(dir.join("two.json")).unwrap()).unwrap();
    assert_eq!(div.n(), 2);
}

#[test]
fn bad_format_version_is_rejected() {
    let dir = tmpdir("badversion");
    std::fs::write(
        dir.join("bad.json"),
        r#"{"format_version":9,"tile_vertices":[[0,0],[1,0],[0.5,0.9]],"side_labels":["a","b","c"],"words":["e"]}"#,
    )
    .unwrap();
    let out = run_in(&dir, &["spectrum", "--div", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("format_version"));
}
