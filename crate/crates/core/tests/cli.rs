use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_ternstem");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("TERNSTEM_DATA")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = run(&all);
    (
        o.status.code().unwrap(),
        serde_json::from_slice(&o.stdout).expect("json report"),
    )
}

fn verdicts(v: &Value) -> Vec<(String, bool)> {
    v["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| {
            (
                x["name"].as_str().unwrap().to_string(),
                x["passed"].as_bool().unwrap(),
            )
        })
        .collect()
}

#[test]
fn construct_13() {
    let o = run(&["construct", "--n", "13"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("f(0) = 2101201021012"));
    assert!(out.contains("f(1) = 0212012102120"));
    assert!(out.contains("f(2) = 1020120210201"));
    assert!(out.contains("certificate verdict: true"));
    assert!(out.contains("sha256 appendix.txt: "));
}

#[test]
fn construct_exception_exit_code() {
    for n in ["14", "20"] {
        let o = run(&["construct", "--n", n]);
        assert_eq!(o.status.code(), Some(3), "n={n}");
    }
    assert_eq!(run(&["construct", "--n", "5"]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(run(&["construct", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["construct"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn check_appendix_104() {
    let (code, v) = json(&["check-appendix"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["entries"].as_array().unwrap().len(), 104);
    assert!(verdicts(&v).iter().all(|(_, p)| *p));
}

#[test]
fn search_nonexistence() {
    let (code, v) = json(&["search", "--n", "15"]);
    assert_eq!(code, 3);
    assert_eq!(v["details"]["exhaustive"], true);
    assert_eq!(v["details"]["solutions"].as_array().unwrap().len(), 0);
    let (code, v) = json(&["search", "--n", "17", "--budget", "10"]);
    assert_eq!(code, 1);
    assert_eq!(v["details"]["exhaustive"], false);
    let (code, _) = json(&["search", "--n", "13", "--mode", "first"]);
    assert_eq!(code, 0);
}

#[test]
fn text_and_json_carry_the_same_verdicts() {
    for args in [
        &["construct", "--n", "130"][..],
        &["make-x", "--k", "9"],
        &["verify-morphism", "--seed", "012"],
        &["verify-morphism", "--n", "21"],
    ] {
        let (code, v) = json(args);
        let text = run(args);
        assert_eq!(text.status.code(), Some(code));
        let lines: Vec<(String, bool)> = stdout(&text)
            .lines()
            .filter_map(|l| l.strip_prefix("verdict "))
            .map(|l| {
                let (name, r) = l.split_once(": ").unwrap();
                (name.to_string(), r == "pass")
            })
            .collect();
        assert_eq!(lines, verdicts(&v), "{args:?}");
    }
}

#[test]
fn reports_are_reproducible() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timings_ms");
        v
    };
    let args = ["search", "--n", "18", "--jobs", "3"];
    let (_, a) = json(&args);
    let (_, b) = json(&["search", "--n", "18", "--jobs", "1"]);
    let (_, c) = json(&args);
    assert_eq!(strip(a.clone()), strip(c));
    assert_eq!(strip(a)["details"], strip(b)["details"]);
}

#[test]
fn stream_and_verify_stem() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let word = dir.path().join("word.txt");
    let o = run(&[
        "stream",
        "--n",
        "17",
        "--length",
        "1000",
        "--certificate",
        cert.to_str().unwrap(),
        "--output",
        word.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let c: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c["covered_length"], 1000);
    assert_eq!(c["permutations"].as_array().unwrap().len(), 1000 / 17);
    let stem = c["stem"].as_str().unwrap();
    let o = run(&[
        "verify-stem",
        "--stem",
        stem,
        "--input",
        word.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));

    std::fs::write(&word, "0101").unwrap();
    let o = run(&[
        "verify-stem",
        "--stem",
        "01",
        "--input",
        word.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict square-free: FAIL"));
}

fn write_fixtures(dir: &Path, appendix: &str) {
    let muller = include_str!("../data/muller.txt");
    std::fs::write(dir.join("appendix.txt"), appendix).unwrap();
    std::fs::write(dir.join("muller.txt"), muller).unwrap();
}

#[test]
fn data_dir_flag_and_env() {
    let dir = tempfile::tempdir().unwrap();
    // a forged entry: 012 repeated has squares under the morphism
    write_fixtures(dir.path(), "13 2101201021012\n17 20120120120120120\n");
    let d = dir.path().to_str().unwrap();

    let (code, v) = json(&["--data-dir", d, "construct", "--n", "17"]);
    assert_eq!(code, 1, "{v}");
    let (code, embedded) = json(&["construct", "--n", "17"]);
    assert_eq!(code, 0);
    assert_ne!(v["fixture_checksums"], embedded["fixture_checksums"]);

    let o = Command::new(BIN)
        .args(["construct", "--n", "17"])
        .env("TERNSTEM_DATA", d)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));

    let missing = dir.path().join("nope");
    let o = run(&[
        "--data-dir",
        missing.to_str().unwrap(),
        "construct",
        "--n",
        "13",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dispatch_in_process() {
    let d = ternstem::cli::dispatch(["ternstem", "make-x", "--k", "6"]);
    assert_eq!(d.code, 0);
    assert!(d.stdout.contains("|r| = 23, |x| = 9"));
    let d = ternstem::cli::dispatch(["ternstem", "make-x", "--k", "5"]);
    assert_eq!(d.code, 2);
    assert!(d.stderr.contains("error"));
}
