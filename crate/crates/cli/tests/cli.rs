use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-mzv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn zeta2_vanishes() {
    let v = json(&run(&["pmzv", "--p", "7", "--N", "10", "--index", "2"]));
    assert_eq!(v["result"]["route"], "af");
    assert_eq!(v["result"]["word"], "01");
    assert_eq!(v["result"]["value"]["zero"], true);
    assert_eq!(v["result"]["value"]["v"], 10);
    assert_eq!(v["manifest"]["W"], 4);
}

#[test]
fn empty_word_is_one() {
    let v = json(&run(&["pmzv", "--p", "7", "--N", "10", "--word", ""]));
    assert_eq!(v["result"]["value"]["unit"], "1");
    assert_eq!(v["result"]["value"]["v"], 0);
}

#[test]
fn zeta3_text() {
    let out = run(&["pmzv", "--p", "5", "--N", "6", "--index", "3", "--pretty"]);
    assert!(out.status.success());
    // Bernoulli-number value 5^3 * 332578, unit reduced mod 5^3
    assert_eq!(String::from_utf8_lossy(&out.stdout), "zeta_5(001) = 5^3 * 78 + O(5^6)\n");
}

#[test]
fn even_prime_is_a_config_error() {
    let out = run(&["pmzv", "--p", "4", "--index", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p must be an odd prime"));
}

#[test]
fn guardrails_are_config_errors() {
    assert_eq!(run(&["pmzv", "--N", "65", "--index", "2"]).status.code(), Some(2));
    assert_eq!(run(&["pmzv", "--W", "7", "--index", "2"]).status.code(), Some(2));
    assert_eq!(run(&["pmzv", "--W", "2", "--index", "3"]).status.code(), Some(2));
    assert_eq!(run(&["pmzv", "--word", "012"]).status.code(), Some(2));
    assert_eq!(run(&["pmzv", "--index", "2,0"]).status.code(), Some(2));
    assert_eq!(run(&["pmzv", "--bogus"]).status.code(), Some(2));
}

#[test]
fn short_truncation_is_a_numeric_error() {
    let out = run(&["pmzv", "--p", "7", "--N", "10", "--W", "3", "--D", "12", "--index", "3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn polylog_matches_oracles() {
    let v = json(&run(&["polylog", "--p", "5", "--N", "8", "--index", "2", "--z", "5"]));
    assert_eq!(v["check"]["oracle"], "nested_sum");
    assert_eq!(v["check"]["status"], "consistent");
    assert_eq!(v["result"]["route"], "disc0");
    let v = json(&run(&["polylog", "--p", "7", "--index", "1", "--z", "7"]));
    assert_eq!(v["check"]["oracle"], "log");
    assert_eq!(v["check"]["status"], "consistent");
    let v = json(&run(&["polylog", "--p", "7", "--word", "10", "--z", "14/3"]));
    assert_eq!(v["check"]["status"], "unchecked");
}

#[test]
fn polylog_outside_disc() {
    assert_eq!(run(&["polylog", "--z", "3", "--p", "5", "--index", "2"]).status.code(), Some(2));
    assert_eq!(run(&["polylog", "--z", "1/5", "--p", "5", "--index", "2"]).status.code(), Some(2));
    assert_eq!(run(&["polylog", "--z", "x", "--p", "5", "--index", "2"]).status.code(), Some(2));
}

#[test]
fn iterint_routes() {
    let v = json(&run(&["iterint", "--p", "5", "--N", "6", "--W", "2", "--word", "0", "--to", "6"]));
    assert_eq!(v["result"]["route"], "disc1");
    assert_eq!(v["to"], "6");
    let v = json(&run(&["iterint", "--p", "5", "--N", "6", "--W", "2", "--word", "01"]));
    assert_eq!(v["result"]["route"], "af");
    assert_eq!(v["from"], "1_0");
    let out = run(&["iterint", "--p", "5", "--N", "6", "--W", "2", "--word", "0", "--to", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shuffle_product() {
    let v = json(&run(&["shuffle", "--u", "01", "--v", "1"]));
    let terms = v["shuffle"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[0]["word"], "011");
    assert_eq!(terms[0]["num"], "2");
    let v = json(&run(&["shuffle", "--u", "a", "--v", "0", "--alphabet", "01a"]));
    assert_eq!(v["shuffle"]["terms"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_suites() {
    let v = json(&run(&["verify", "--suite", "theorem", "--p", "7", "--W", "4"]));
    assert_eq!(v["passed"], true);
    let v = json(&run(&["verify", "--suite", "shuffle", "--W", "5"]));
    assert_eq!(v["suites"][0]["checks"].as_array().unwrap().len(), 5);
    let v = json(&run(&["verify", "--suite", "oracle,torsor", "--p", "5", "--W", "4"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 2);
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_and_atomic() {
    let args = ["pmzv", "--p", "5", "--N", "8", "--index", "2,1", "--threads", "2"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let mut with_file = args.to_vec();
    with_file.extend(["--json-out", path.to_str().unwrap()]);
    let c = run(&with_file);
    assert!(c.status.success());
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}
