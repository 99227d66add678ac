mod common;

use common::*;
use serde_json::{json, Value};

#[test]
fn every_verb_is_deterministic_and_matches_its_schema() {
    let report = write_report("verbs");
    for (verb, args, code) in verb_cases(&report) {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (_, got) = round_trip(verb, &args).unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(got, code, "{verb} {args:?}");
    }
}

#[test]
fn decide_example() {
    let (doc, code) = round_trip(
        "decide",
        &["--group", S3_TABLE, "--alpha", r#"{"images":[0,1,2]}"#, "--K", "2^2", "--L", "2^6", "--sigma", "1"],
    )
    .unwrap();
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "SOLVABLE");
    assert_eq!(doc["tau"], json!({ "frob": 3 }));
}

#[test]
fn lift_tau_coprimality_failure() {
    let r = skewgal(&["lift-tau", "--K", "2^2", "--L", "2^4", "--sigma", "1"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.is_empty());
    let e: Value = serde_json::from_str(&r.stderr).unwrap();
    assert_eq!(e["error"], "CoprimalityFailure");
    assert_eq!(e["details"]["d"], 2);
    assert_eq!(e["details"]["extensions"].as_array().unwrap().len(), 2);
}

#[test]
fn malformed_input_exits_2() {
    for args in [
        vec!["decide", "--group", "{oops", "--alpha", "[0]", "--K", "2^2", "--L", "2^6", "--sigma", "1"],
        vec!["lift-tau", "--K", "2^x", "--L", "2^6", "--sigma", "1"],
        vec!["lift-tau", "--K", "2^2", "--L", "2^6", "--sigma", "7"],
        vec!["construct-lprime", "--spec", "3:zz", "--p-kernel", "5"],
        vec!["level", "--field", "Q(sqrt:"],
        vec!["verify-report", "--report", "/nonexistent/report.json"],
        vec!["frobnicate"],
    ] {
        let r = skewgal(&args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stderr);
        let e: Value = serde_json::from_str(&r.stderr).unwrap();
        assert!(violations("error", &e).is_empty(), "{e}");
    }
}

#[test]
fn tampered_report_exits_3() {
    let path = write_report("tamper");
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let c0: i128 = doc["Q"][0].as_str().unwrap().parse().unwrap();
    doc["Q"][0] = json!((c0 + 2).to_string());
    let r = skewgal(&["verify-report", "--report", &doc.to_string()]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    let e: Value = serde_json::from_str(&r.stderr).unwrap();
    assert_eq!(e["error"], "CertificationFailure");
    assert_eq!(e["details"]["ok"], false);
    assert!(violations("verify-report", &e["details"]).is_empty());
}

#[test]
fn seed_changes_field_but_not_verdict() {
    let args = |seed: &'static str| {
        ["decide", "--group", S3_TABLE, "--alpha", "[0,1,2]", "--K", "3^2", "--L", "3^6", "--sigma", "1", "--seed", seed]
    };
    let a: Value = serde_json::from_str(&skewgal(&args("0")).stdout).unwrap();
    let b: Value = serde_json::from_str(&skewgal(&args("17")).stdout).unwrap();
    assert_eq!(a["status"], b["status"]);
    assert_eq!(a["tau"], b["tau"]);
}

#[test]
fn pretty_output_parses_to_the_same_document() {
    let args = ["level", "--field", "Q(sqrt:-7)"];
    let plain: Value = serde_json::from_str(&skewgal(&args).stdout).unwrap();
    let pretty = skewgal(&[&args[..], &["--pretty"]].concat());
    assert!(pretty.stdout.contains("\n  "));
    assert_eq!(plain, serde_json::from_str::<Value>(&pretty.stdout).unwrap());
}

#[test]
fn selftest_timings_are_opt_in() {
    let quiet: Value = serde_json::from_str(&skewgal(&["selftest", "--suite", "8"]).stdout).unwrap();
    assert!(quiet["suites"][0].get("elapsed_ms").is_none());
    let timed: Value = serde_json::from_str(&skewgal(&["selftest", "--suite", "8", "--timings"]).stdout).unwrap();
    assert!(timed["suites"][0]["elapsed_ms"].is_u64());
    assert!(violations("selftest", &timed).is_empty());
}
