//! End-to-end tests of the command-line interface: exit codes for the
//! documented scenarios and a pinned JSON report schema.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn testdata(name: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.push("testdata");
    path.push(name);
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpltl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout)
        .unwrap_or_else(|e| panic!("bad JSON: {e}\n{}", String::from_utf8_lossy(&output.stdout)))
}

#[test]
fn check_corpus_proof_exits_zero() {
    let out = run(&["check", "--proof", &testdata("mix1.prf")]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn check_bad_mp_exits_one_with_diagnostics() {
    let out = run(&["check", "--proof", &testdata("bad_mp.prf"), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["ok"], Value::Bool(false));
    let failures = report["data"]["failures"].as_array().unwrap();
    assert_eq!(failures.len(), 1);
    assert_eq!(failures[0]["line"], 3);
}

#[test]
fn eval_constant_run_box() {
    let out = run(&[
        "eval",
        "--system",
        &testdata("one_state.sys"),
        "--formula",
        "G P",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "eval",
        "--system",
        &testdata("one_state.sys"),
        "--formula",
        "F ~P",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn eval_resolves_cs_path_and_point_mode() {
    // two_state.sys points at sample.cs; [c1]_1 (P -> P) holds everywhere
    let out = run(&[
        "eval",
        "--system",
        &testdata("two_state.sys"),
        "--formula",
        "[c1]_1 (P -> P)",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // the seeded [x]_1 P is false at s0 (P fails there) but true at s1
    let out = run(&[
        "eval",
        "--system",
        &testdata("two_state.sys"),
        "--formula",
        "[x]_1 P",
        "--run",
        "0",
        "--pos",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "eval",
        "--system",
        &testdata("two_state.sys"),
        "--formula",
        "[x]_1 P",
        "--run",
        "0",
        "--pos",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn valid_reports_violations() {
    let out = run(&["valid", "--system", &testdata("two_state.sys")]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sat_false_is_nomodel() {
    let out = run(&["sat", "--formula", "false"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sat_witness_round_trips_through_eval() {
    let dir = std::env::temp_dir().join("lpltl-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let witness = dir.join("witness.sys");
    let out = run(&[
        "sat",
        "--formula",
        "(F P & G (P -> X P))",
        "--out",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "eval",
        "--system",
        witness.to_str().unwrap(),
        "--formula",
        "(F P & G (P -> X P))",
        "--run",
        "0",
        "--pos",
        "0",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["parse"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["parse", "--formula", "(P ->"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["check", "--proof", "/nonexistent.prf"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["wat"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn elim_nec_then_internalize_pipeline() {
    let dir = std::env::temp_dir().join("lpltl-cli-pipeline");
    std::fs::create_dir_all(&dir).unwrap();
    let star_proof = dir.join("next_taut_star.prf");

    let out = run(&["elim-nec", "--proof", &testdata("next_taut.prf")]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::write(&star_proof, &out.stdout).unwrap();

    // the rewritten proof checks
    let out = run(&["check", "--proof", star_proof.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    // internalizing the base proof directly is refused
    let out = run(&[
        "internalize",
        "--proof",
        &testdata("next_taut.prf"),
        "--agent",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // internalizing the rewritten proof produces a term and a new proof
    let out = run(&[
        "internalize",
        "--proof",
        star_proof.to_str().unwrap(),
        "--agent",
        "1",
        "--json",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = stdout_json(&out);
    let term = report["data"]["term"].as_str().unwrap();
    assert!(term.contains('.'), "term should be an application: {term}");
    let internalized = dir.join("next_taut_internalized.prf");
    std::fs::write(&internalized, report["data"]["proof"].as_str().unwrap()).unwrap();
    let out = run(&["check", "--proof", internalized.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn json_report_schema_is_pinned() {
    // golden shape for the sat command on an unsatisfiable input
    let out = run(&["sat", "--formula", "false", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    let expected = serde_json::json!({
        "schema": 1,
        "command": "sat",
        "ok": false,
        "data": {
            "result": "nomodel",
            "stats": {
                "closure_size": 1,
                "atoms_generated": 1,
                "atoms_retained": 1,
                "atoms_pruned": 0,
                "sccs_examined": 1,
                "candidates_tried": 0,
                "verification_failures": 0,
            },
        },
        "diagnostics": [],
    });
    assert_eq!(report, expected);

    // golden shape for parse
    let out = run(&["parse", "--formula", "G P", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let expected = serde_json::json!({
        "schema": 1,
        "command": "parse",
        "ok": true,
        "data": {
            "canonical": "(((false -> false) U (P -> false)) -> false)",
            "subformulas": 6,
            "closure_plus": 9,
        },
        "diagnostics": [],
    });
    assert_eq!(report, expected);
}

#[test]
fn corpus_command_lists_entries() {
    let out = run(&["corpus", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let entries = report["data"]["entries"].as_array().unwrap();
    assert!(entries.len() >= 12);
    assert!(entries.iter().all(|e| e["ok"] == Value::Bool(true)));
    let names: Vec<&str> = entries
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"mix1"));

    let out = run(&["corpus", "--name", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}
