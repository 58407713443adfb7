use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    run_env(args, stdin, &[])
}

fn run_env(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mackeykit"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("spawn mackeykit");
    child
        .stdin
        .as_mut()
        .expect("stdin")
        .write_all(stdin.as_bytes())
        .expect("write stdin");
    child.wait_with_output().expect("wait")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn group_verb_reports_order_and_table() {
    let out = run(&["group"], r#"{"group":{"name":"C2"}}"#);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["order"], 2);
    assert_eq!(doc["abelian"], true);
    assert_eq!(doc["cayley"][1][1], 0);
}

#[test]
fn double_coset_reps_for_point_stabilizers_in_s3() {
    let out = run(
        &["double-cosets"],
        r#"{"group":{"name":"S3"},"k":[0,1],"h":[0,1]}"#,
    );
    assert!(out.status.success());
    let doc = stdout_json(&out);
    let reps = doc["reps"].as_array().unwrap();
    assert_eq!(reps.len(), 2);
    assert_eq!(reps[0], 0);
}

#[test]
fn cp_example_pipes_into_contractible_and_acyclicity() {
    let built = run(&["cp-example"], r#"{"p":3}"#);
    assert!(built.status.success());
    let doc = String::from_utf8(built.stdout).unwrap();

    let contractible = run(&["contractible"], &doc);
    assert!(contractible.status.success());
    assert_eq!(stdout_json(&contractible)["contractible"], false);

    let acyclic = run(&["gamma-acyclic"], &doc);
    assert!(acyclic.status.success());
    assert_eq!(stdout_json(&acyclic)["acyclic"], true);
}

#[test]
fn suite_on_smallest_configuration_passes() {
    let out = run(&["suite"], r#"{"group":{"name":"C2"},"ring":"Fp:2"}"#);
    assert!(out.status.success(), "suite should exit 0 when everything passes");
    let doc = stdout_json(&out);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["seed"], 1729, "default seed");
    assert_eq!(doc["group"], "C2");
    for item in doc["items"].as_array().unwrap() {
        assert_eq!(item["pass"], true, "item {} failed", item["name"]);
    }
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let input = r#"{"group":{"name":"S3"},"ring":"Fp:3"}"#;
    let first = run(&["suite"], input);
    let second = run(&["suite"], input);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let a = run(&["subgroups"], r#"{"group":{"name":"S3"}}"#);
    let b = run(&["subgroups"], r#"{"group":{"name":"S3"}}"#);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_flag_is_recorded_in_the_report() {
    let out = run(&["suite", "--seed", "7"], r#"{"group":{"name":"C2"},"ring":"Q"}"#);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["seed"], 7);
}

#[test]
fn malformed_documents_exit_two_with_machine_readable_code() {
    let out = run(&["group"], "this is not json");
    assert_eq!(out.status.code(), Some(2));
    let doc = stdout_json(&out);
    assert_eq!(doc["error"]["code"], "malformed-input");
    assert!(doc["error"]["message"].as_str().unwrap().len() > 0);

    let out = run(&["no-such-verb"], "{}");
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["code"], "malformed-input");

    let out = run(&["gset"], r#"{"group":{"name":"C2"}}"#);
    assert_eq!(out.status.code(), Some(2), "gset needs a subgroup or a table");
}

#[test]
fn group_size_cap_is_enforced_from_the_environment() {
    let out = run_env(
        &["subgroups"],
        r#"{"group":{"name":"S3"}}"#,
        &[("MACKEYKIT_MAX_GROUP", "4")],
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["code"], "group-too-large");

    let ok = run_env(
        &["subgroups"],
        r#"{"group":{"name":"S3"}}"#,
        &[("MACKEYKIT_MAX_GROUP", "6")],
    );
    assert!(ok.status.success());
}

#[test]
fn file_input_matches_stdin_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("in.json");
    let doc = r#"{"group":{"name":"C4"},"k":[0,2],"h":[0,1,2,3]}"#;
    std::fs::write(&path, doc).unwrap();
    let from_file = run(&["omega-basis", "--input", path.to_str().unwrap()], "");
    let from_stdin = run(&["omega-basis"], doc);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_stdin.stdout);
}

#[test]
fn mackey_and_quotient_checks_pass_on_s3() {
    let out = run(&["mackey-check"], r#"{"group":{"name":"S3"}}"#);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["pass"], true);

    let out = run(&["quotient-check"], r#"{"group":{"name":"S3"},"ring":"Z"}"#);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["holds"], true);
    for pair in doc["pairs"].as_array().unwrap() {
        assert_eq!(pair["surjective"], true);
        assert_eq!(pair["kernel_matches"], true);
    }
}

#[test]
fn functor_documents_round_trip_between_verbs() {
    let fp = run(
        &["fp"],
        r#"{"group":{"name":"C2"},"ring":"Q","module":{"gset":{"size":2,"action":[[0,1],[1,0]]}}}"#,
    );
    assert!(fp.status.success());
    let yo = run(
        &["yoneda"],
        r#"{"group":{"name":"C2"},"ring":"Q","gset":{"size":2,"action":[[0,1],[1,0]]}}"#,
    );
    assert!(yo.status.success());
    let pair = format!(
        r#"{{"m":{},"n":{}}}"#,
        String::from_utf8(fp.stdout).unwrap().trim(),
        String::from_utf8(yo.stdout).unwrap().trim()
    );
    let nat = run(&["nat-hom"], &pair);
    assert!(nat.status.success());
    // Endomorphisms of the free rank-one functor biject with the two-element
    // double coset space e\C2/e.
    assert_eq!(stdout_json(&nat)["rank"], 2);
}
