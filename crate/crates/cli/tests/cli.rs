use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const GOLDEN: &str = include_str!("../../core/tests/golden/windmill_5_3.json");

fn harmony(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harmony"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

#[test]
fn windmill_matches_golden_and_verifies() {
    let dir = TempDir::new().unwrap();
    let file = p(&dir, "d53.json");
    let out = harmony(&[
        "construct",
        "--family",
        "windmill",
        "--n",
        "5",
        "--m",
        "3",
        "--group",
        "5,3",
        "--out",
        &file,
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read_to_string(&file).unwrap(), GOLDEN);
    let r = report(&out);
    assert_eq!(r["exit_code"], 0);
    assert_eq!(r["artifacts"][0], file);
    assert_eq!(r["outcome"]["valid"], true);

    let out = harmony(&["verify", "--input", &file]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["outcome"]["status"], "valid");
}

#[test]
fn construct_inlines_labeling_without_out() {
    let out = harmony(&["construct", "--family", "cycle", "--n", "5", "--group", "5"]);
    assert_eq!(code(&out), 0);
    let labels = &report(&out)["outcome"]["labeling"]["labels"];
    assert_eq!(labels.as_object().unwrap().len(), 5);
}

#[test]
fn construct_with_given_subgroup() {
    let out = harmony(&[
        "construct",
        "--family",
        "superwheel",
        "--k",
        "3",
        "--n",
        "5",
        "--group",
        "10,2",
        "--subgroup",
        "2,0",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(report(&out)["outcome"]["witness"]["source"], "given");
}

#[test]
fn invalid_labeling_exits_1() {
    let dir = TempDir::new().unwrap();
    let mut doc: Value = serde_json::from_str(GOLDEN).unwrap();
    doc["labels"]["v.1.1"] = serde_json::json!([0, 0]);
    let file = p(&dir, "bad.json");
    fs::write(&file, doc.to_string()).unwrap();
    let out = harmony(&["verify", "--input", &file]);
    assert_eq!(code(&out), 1);
    let cert = &report(&out)["outcome"]["certificate"];
    assert_eq!(cert["valid"], false);
    assert!(!cert["vertex_collisions"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let file = p(&dir, "junk.json");
    fs::write(&file, "{ not json").unwrap();
    assert_eq!(code(&harmony(&["verify", "--input", &file])), 2);
    assert_eq!(
        code(&harmony(&["verify", "--input", &p(&dir, "missing.json")])),
        2
    );

    let mut doc: Value = serde_json::from_str(GOLDEN).unwrap();
    doc["labels"].as_object_mut().unwrap().remove("center");
    fs::write(&file, doc.to_string()).unwrap();
    assert_eq!(code(&harmony(&["verify", "--input", &file])), 2);
}

#[test]
fn no_witness_exits_3() {
    let out = harmony(&[
        "construct",
        "--family",
        "cycle",
        "--n",
        "4",
        "--group",
        "2,2",
    ]);
    assert_eq!(code(&out), 3);
    assert_eq!(report(&out)["outcome"]["status"], "no_witness");
}

#[test]
fn unsupported_exits_4() {
    assert_eq!(
        code(&harmony(&[
            "construct",
            "--family",
            "windmill",
            "--n",
            "3",
            "--m",
            "2",
            "--group",
            "6"
        ])),
        4
    );
    // Z4 is not harmonious, so the cycle hypothesis fails for the given subgroup
    assert_eq!(
        code(&harmony(&[
            "construct",
            "--family",
            "wheel",
            "--n",
            "4",
            "--group",
            "8",
            "--subgroup",
            "2"
        ])),
        4
    );
}

#[test]
fn budget_exits_5() {
    let out = harmony(&[
        "search",
        "--family",
        "prism",
        "--m",
        "2",
        "--n",
        "4",
        "--group",
        "12",
        "--node-budget",
        "10",
        "--deterministic",
    ]);
    assert_eq!(code(&out), 5);
    assert_eq!(
        report(&out)["outcome"]["results"][0]["status"],
        "budget_exhausted"
    );
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&harmony(&["frobnicate"])), 64);
    assert_eq!(
        code(&harmony(&[
            "construct",
            "--family",
            "cycle",
            "--n",
            "5",
            "--group",
            "5,x"
        ])),
        64
    );
    assert_eq!(
        code(&harmony(&[
            "construct",
            "--family",
            "cycle",
            "--n",
            "5",
            "--group",
            "6"
        ])),
        64
    );
    assert_eq!(
        code(&harmony(&[
            "construct",
            "--family",
            "cycle",
            "--n",
            "2",
            "--group",
            "2"
        ])),
        64
    );
    assert_eq!(
        code(&harmony(&["search", "--family", "cycle", "--n", "5"])),
        64
    );
    assert_eq!(code(&harmony(&["--help"])), 0);
}

#[test]
fn export_writes_dot() {
    let dir = TempDir::new().unwrap();
    let file = p(&dir, "d53.json");
    fs::write(&file, GOLDEN).unwrap();
    let dot = p(&dir, "d53.dot");
    let out = harmony(&["export", "--dot", &file, "--out", &dot]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("graph G {"));
    assert!(text.contains(r#""v.1.1" [label="(1,0)"];"#), "{text}");
    assert!(text.contains(r#""center" -- "v.1.1""#));

    // default output path
    assert_eq!(code(&harmony(&["export", "--dot", &file])), 0);
    assert!(Path::new(&dot).exists());
}

#[test]
fn search_all_groups_and_count() {
    let out = harmony(&[
        "search",
        "--family",
        "cycle",
        "--n",
        "4",
        "--all-groups",
        "--deterministic",
    ]);
    assert_eq!(code(&out), 3);
    let results = report(&out)["outcome"]["results"]
        .as_array()
        .unwrap()
        .clone();
    assert_eq!(results.len(), 2);
    assert!(results.iter().all(|r| r["status"] == "exhausted_none"));

    let out = harmony(&[
        "search", "--family", "cycle", "--n", "3", "--group", "3", "--count",
    ]);
    assert_eq!(code(&out), 0);
    // every bijection V(C3) -> Z3 is harmonious: 3! of them
    assert_eq!(report(&out)["outcome"]["results"][0]["solutions_count"], 6);
}

#[test]
fn search_bare_edge_list() {
    let dir = TempDir::new().unwrap();
    let file = p(&dir, "c5.json");
    fs::write(
        &file,
        r#"{"edges": [["a","b"],["b","c"],["c","d"],["d","e"],["e","a"]]}"#,
    )
    .unwrap();
    let labeling = p(&dir, "found.json");
    let out = harmony(&[
        "search", "--edges", &file, "--group", "5", "--out", &labeling,
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&harmony(&["verify", "--input", &labeling])), 0);
}

#[test]
fn survey_writes_csv() {
    let dir = TempDir::new().unwrap();
    let csv = p(&dir, "cycles.csv");
    let out = harmony(&["survey", "--family", "cycle", "--n", "3..8", "--out", &csv]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 9);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",yes")), "{text}");
    assert_eq!(report(&out)["outcome"]["agreement"]["yes"], 9);
}

#[test]
fn group_seq() {
    let out = harmony(&["group-seq", "4,2"]);
    assert_eq!(code(&out), 0);
    let seq = report(&out)["outcome"]["sequence"]
        .as_array()
        .unwrap()
        .len();
    assert_eq!(seq, 8);
    let out = harmony(&["group-seq", "2,2"]);
    assert_eq!(code(&out), 3);
    assert_eq!(report(&out)["outcome"]["predicate"], false);
}

#[test]
fn report_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let rep = p(&dir, "report.json");
    let out = harmony(&["group-seq", "7", "--report", &rep]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(r["exit_code"], 0);
    assert!(r["wall_time_ms"].as_f64().unwrap() >= 0.0);
}
