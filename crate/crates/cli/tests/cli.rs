use std::process::Command;

use mvlp_cli::{parse_cyclo_json, parse_padic_json, run};
use mvlp_core::arith::rational::rat;
use mvlp_core::arith::CycloNumber;
use mvlp_core::characters::parse_label;
use mvlp_core::classical::L_special;
use serde_json::Value;

fn mvlp(args: &[&str]) -> mvlp_cli::RunOutcome {
    run(std::iter::once("mvlp").chain(args.iter().copied()))
}

fn lines(out: &str) -> Vec<Value> {
    out.lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

#[test]
fn bernoulli_examples() {
    let out = mvlp(&["bernoulli", "--n", "1"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "{\"n\":1,\"value\":\"-1/2\"}\n"));
    let out = mvlp(&["multi-bernoulli", "--n", "0", "--r", "3"]);
    assert_eq!(lines(&out.stdout)[0]["value"], "1");
    let out = mvlp(&["bernoulli", "--n", "0..12", "--format", "csv"]);
    let rows: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(rows[0], "n,value");
    assert_eq!(rows[13], "12,-691/2730");
}

#[test]
fn theorem4_example_passes() {
    let out = mvlp(&["verify", "--suite", "theorem4", "--p", "5", "--prec", "12", "--r", "2", "--n", "1", "--chi", "triv"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let recs = lines(&out.stdout);
    assert_eq!(recs.len(), 1);
    let rec = &recs[0];
    for key in ["p", "N", "r", "n", "chi", "F", "lhs", "rhs", "diff_valuation", "guaranteed_precision", "pass"] {
        assert!(rec.get(key).is_some(), "missing {key}");
    }
    assert_eq!(rec["pass"], true);
    let lhs = parse_padic_json(&rec["lhs"], 5).unwrap();
    let rhs = parse_padic_json(&rec["rhs"], 5).unwrap();
    let g = rec["guaranteed_precision"].as_i64().unwrap();
    assert!(g >= 8);
    assert!(lhs.congruent(&rhs, g));
}

#[test]
fn suites_pass_on_default_grids() {
    for suite in ["eq5-eq6", "theorem2", "lemma3", "theorem4", "f-stability"] {
        let out = mvlp(&["verify", "--suite", suite, "--prec", "8", "--n", "1..2"]);
        assert_eq!(out.code, 0, "{suite}: {}", out.stderr);
        let recs = lines(&out.stdout);
        assert!(!recs.is_empty());
        assert!(recs.iter().all(|r| r["pass"] == true && r["suite"] == suite));
    }
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["verify", "--suite", "lemma3", "--p", "5,7", "--n", "1..3", "--prec", "10"];
    let one = mvlp(&[&args[..], &["--jobs", "1"]].concat());
    let four = mvlp(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one, four);
    assert_eq!(one, mvlp(&[&args[..], &["--jobs", "1"]].concat()));
}

#[test]
fn exact_values_round_trip() {
    let out = mvlp(&["l-special", "--n", "1..3", "--r", "2", "--chi", "5.1"]);
    assert_eq!(out.code, 0);
    let chi = parse_label("5.1").unwrap();
    for rec in lines(&out.stdout) {
        let n = rec["n"].as_u64().unwrap() as u32;
        let value = parse_cyclo_json(&rec["value"]).unwrap();
        assert_eq!(value, L_special(n, 2, &chi, 5).unwrap());
    }
    let out = mvlp(&["gen-bernoulli", "--n", "2", "--r", "1", "--chi", "triv"]);
    let rec = &lines(&out.stdout)[0];
    assert_eq!(parse_cyclo_json(&rec["value"]).unwrap(), CycloNumber::from_rational(1, rat(1, 6)));
}

#[test]
fn padic_values_round_trip() {
    let out = mvlp(&["padic-l", "--s", "-3", "--r", "2", "--p", "7", "--prec", "10"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let rec = &lines(&out.stdout)[0];
    let x = parse_padic_json(&rec["value"], 7).unwrap();
    assert_eq!(rec["text"].as_str().unwrap(), x.to_string());
    let tracked = mvlp(&["padic-l", "--s", "-3", "--r", "2", "--p", "7", "--prec", "10", "--tracked"]);
    let y = parse_padic_json(&lines(&tracked.stdout)[0]["value"], 7).unwrap();
    let g = x.abs_precision().unwrap().min(y.abs_precision().unwrap());
    assert!(x.congruent(&y, g));
}

#[test]
fn exit_codes() {
    assert_eq!(mvlp(&["l-special", "--n", "1", "--r", "2", "--chi", "9.9"]).code, 3);
    assert_eq!(mvlp(&["padic-l", "--s", "1", "--p", "4"]).code, 4);
    assert_eq!(mvlp(&["padic-l", "--s", "-1", "--p", "7", "--chi", "5.1"]).code, 5);
    assert_eq!(mvlp(&["padic-l", "--s", "1", "--p", "5"]).code, 6);
    let bad = mvlp(&["bogus"]);
    assert_eq!(bad.code, 2);
    assert_eq!(bad.stderr.lines().count(), 1);
    assert_eq!(mvlp(&["--help"]).code, 0);
}

#[test]
fn binary_matches_library() {
    let out = Command::new(env!("CARGO_BIN_EXE_mvlp"))
        .args(["multi-bernoulli", "--n", "0..4", "--r", "2", "--x", "1/2", "--format", "text"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let lib = mvlp(&["multi-bernoulli", "--n", "0..4", "--r", "2", "--x", "1/2", "--format", "text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib.stdout);
    let fail = Command::new(env!("CARGO_BIN_EXE_mvlp")).args(["bernoulli", "--n", "x"]).output().unwrap();
    assert_eq!(fail.status.code(), Some(2));
}

#[test]
fn cache_file_is_written_and_reused() {
    let dir = std::env::temp_dir().join(format!("mvlp-cache-{}", std::process::id()));
    let d = dir.to_str().unwrap();
    let first = mvlp(&["bernoulli", "--n", "30", "--cache-dir", d]);
    assert_eq!(first.code, 0);
    assert!(dir.join("bernoulli.txt").exists());
    let second = mvlp(&["bernoulli", "--n", "30", "--cache-dir", d]);
    assert_eq!(first, second);
    std::fs::remove_dir_all(&dir).unwrap();
}
