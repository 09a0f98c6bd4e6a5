use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn relalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relalg")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

const CHAIN: &str = r#"{"domain":["a","b","c"],"relations":{"f":[["a","b"]],"g":[["b","c"]]}}"#;

#[test]
fn eval_prints_named_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t.rel", "f ; g\ndom(f)\n");
    let s = write(dir.path(), "s.json", CHAIN);
    let out = relalg(&["eval", "--term", arg(&t), "--structure", arg(&s), "--report", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["result"]["values"][0]["pairs"], serde_json::json!([["a", "c"]]));
    assert_eq!(v["result"]["values"][1]["pairs"], serde_json::json!([["a", "a"]]));
}

#[test]
fn check_exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.rel", "f ; g\n");
    let bad = write(dir.path(), "bad.rel", "f | g\n");
    assert_eq!(relalg(&["check", "fp", "--term", arg(&good)]).status.code(), Some(0));
    let out = relalg(&["check", "fp", "--term", arg(&bad), "--report", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["status"], "fail");
    assert!(v["result"]["verdicts"][0]["counterexample"].is_object());
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let junk = write(dir.path(), "junk.rel", "f ;; (\n");
    assert_eq!(relalg(&["check", "fp", "--term", arg(&junk)]).status.code(), Some(2));
    assert_eq!(relalg(&["run", "paper:unknown"]).status.code(), Some(2));
    assert_eq!(relalg(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(relalg(&["eval", "--term", "/nonexistent/t.rel", "--structure", "/nonexistent/s.json"]).status.code(), Some(2));
}

#[test]
fn synthesis_reports_locality_failures_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let ran = write(dir.path(), "ran.rel", "ran(f)\n");
    let out = relalg(&["synth", "forward", "--oracle-term", arg(&ran), "--symbols", "1", "--radius", "1", "--report", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json_of(&out)["result"]["error"].as_str().unwrap().contains("not m-bounded"));

    let out = relalg(&["synth", "local-injective", "--oracle-term", arg(&ran), "--symbols", "f", "--radius", "1", "--validate-size", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn auto_radius_finds_the_smallest_radius() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t.rel", "f ; g\n");
    let out = relalg(&["synth", "forward", "--oracle-term", arg(&t), "--symbols", "2", "--auto-radius", "2", "--report", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["estimate"]["radius"], 2);
}

#[test]
fn json_reports_are_deterministic_apart_from_wall_time() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t.rel", "f <+ g\n");
    let run = || {
        let mut v = json_of(&relalg(&["check", "forward", "--term", arg(&t), "--seed", "7", "--report", "json"]));
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn posex_translation_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.fo", "exists z. (f(x,z) & g(z,y))\n");
    let out = relalg(&["translate", "posex-to-term", "--formula", arg(&f), "--verify-size", "2", "--report", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["result"]["homsafe_basis"], true);

    let t = write(dir.path(), "t.rel", "f ; g^\n");
    let out = relalg(&["translate", "term-to-fo3", "--term", arg(&t)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn construct_writes_a_loadable_structure() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("fig.json");
    let out = relalg(&["construct", "fig2", "--n", "2", "--k", "2", "--out", arg(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    let rank = relalg(&["ef", "min-rank", "--left", arg(&out_path), "--right", arg(&out_path), "--max-rank", "2", "--report", "json"]);
    assert_eq!(rank.status.code(), Some(0));
    assert_eq!(json_of(&rank)["result"]["min_rank"], Value::Null);
}

#[test]
fn ef_game_separates_loop_from_no_loop() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"domain":["1"],"relations":{"E":[["1","1"]]}}"#);
    let b = write(dir.path(), "b.json", r#"{"domain":["1"],"relations":{"E":[]}}"#);
    let out = relalg(&["ef", "--left", arg(&a), "--right", arg(&b), "--rank", "1", "--report", "json"]);
    assert_eq!(json_of(&out)["result"]["duplicator_wins"], false);
    let out = relalg(&["ef", "--left", arg(&a), "--right", arg(&b), "--rank", "0", "--report", "json"]);
    assert_eq!(json_of(&out)["result"]["duplicator_wins"], true);
}

#[test]
fn separation_and_claim2() {
    assert_eq!(relalg(&["verify", "claim2", "--m", "2", "--mprime", "3", "--basis", "fa"]).status.code(), Some(0));
    assert_eq!(relalg(&["verify", "claim2", "--basis", "fa+^"]).status.code(), Some(1));
    assert_eq!(relalg(&["run", "paper:separation", "--jobs", "1"]).status.code(), Some(0));
}
