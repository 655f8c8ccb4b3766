use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidkit")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rigidkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn check_rigid_exit_codes() {
    let (code, v) = json(&["check-rigid", &data("t3.edges")]);
    assert_eq!(code, 0);
    assert_eq!(v["tool"], "rigidkit");
    assert_eq!(v["command"], "check-rigid");
    assert_eq!(v["passed"], true);
    let (code, v) = json(&["check-rigid", &data("c4.edges")]);
    assert_eq!(code, 1);
    assert!(v["report"]["counterexample"]["image"].is_array());
}

#[test]
fn bad_input_exits_with_two() {
    let o = run(&["check-rigid", "/nonexistent/graph.edges"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("rigidkit:"));
    let o = run(&["phi-count", &data("t3.edges")]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn homs_with_pins_and_limit() {
    let (code, v) = json(&["homs", "--source", &data("arc.edges"), "--target", &data("t3.edges")]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["count"], 3);
    let (_, v) = json(&["homs", "--source", &data("arc.edges"), "--target", &data("t3.edges"), "--pin", "0=2"]);
    assert_eq!(v["report"]["count"], 0);
    let (_, v) = json(&["homs", "--source", &data("arc.edges"), "--target", &data("t3.edges"), "--limit", "2"]);
    assert_eq!(v["report"]["count"], 2);
}

#[test]
fn phi_commands() {
    let (_, v) = json(&["phi-count", &data("path3.edges")]);
    assert_eq!(v["report"]["count"], "2");
    let out = scratch("member.edges");
    let o = run(&["phi-member", &data("path3.edges"), "--bits", "1", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("3 5\n"));
    assert_eq!(run(&["phi-member", &data("path3.edges"), "--bits", "10"]).status.code(), Some(2));
    let (code, v) = json(&["phi-sweep", &data("rigid8.edges"), "--samples", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["report"]["total_homs"], 0);
}

#[test]
fn duplicated_union_fails_the_diamond_check() {
    let out = scratch("dup.edges");
    let t3 = data("t3.edges");
    assert_eq!(run(&["union", &t3, &t3, "-o", out.to_str().unwrap()]).status.code(), Some(0));
    let u = out.to_str().unwrap();
    let (code, v) = json(&["verify-diamond", u, "--k", "3", "--blocks", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["report"]["entries"][0]["counterexample"]["image"], serde_json::json!([3, 4, 5]));
    let (code, v) = json(&["collide", u, "--blocks", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["report"]["collision"]["map"]["image"], serde_json::json!([3, 4, 5]));
    assert_eq!(json(&["collide", &data("t3.edges")]).0, 0);
    let (code, v) = json(&["verify-diamond", u, "--witness", "component", "--k", "3"]);
    assert_eq!(code, 1);
    assert!(v["report"]["entries"][0]["counterexample"].is_object());
}

#[test]
fn witness_files_and_bounds() {
    let (code, _) = json(&["verify-star", &data("t3.edges"), "--witness", &data("t3.witness"), "--k", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json(&["verify-diamond", &data("t3.edges"), "--witness", "full", "--k", "3"]).0, 0);
    // A strict bound of 3 admits no 3-element witness.
    assert_eq!(
        run(&["verify-diamond", &data("t3.edges"), "--witness", "full", "--k", "3", "--strict"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["verify-diamond", &data("t3.edges"), "--k", "3", "--blocks", "2"]).status.code(), Some(2));
}

#[test]
fn omega_and_search() {
    let (code, v) = json(&["omega-verify", "--i-max", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["entries"].as_array().unwrap().len(), 6);
    let (code, v) = json(&["search-rigid", "--n", "4", "--symmetric", "--mode", "exhaustive"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["rigid_found"], serde_json::json!([]));
    let dir = scratch("finds");
    let o = run(&[
        "search-rigid",
        "--n",
        "8",
        "--symmetric",
        "--mode",
        "random",
        "--budget",
        "20000",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.join("rigid-0000.edges").exists());
    let (code, _) = json(&["check-rigid", dir.join("rigid-0000.edges").to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn symmetrize_and_faithfulness() {
    let out = scratch("sym.edges");
    let (code, v) = json(&["symmetrize", &data("arc.edges"), "-o", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["connected"], true);
    assert!(std::fs::read_to_string(&out).unwrap().starts_with(&format!("{} ", v["report"]["n"])));
    let (code, v) = json(&["verify-faithful", "--left", &data("arc.edges"), "--right", &data("t3.edges")]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["digraph_homs"], 3);
    let (code, v) = json(&["verify-faithful", "--random4", "5", "--seed", "9"]);
    assert_eq!(code, 0);
    assert_eq!(v["seed"], 9);
}

#[test]
fn text_mode_prints_a_summary() {
    let o = run(&["check-rigid", &data("t3.edges")]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "rigid");
}
