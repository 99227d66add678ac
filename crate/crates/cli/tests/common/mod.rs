use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn skewgal(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_skewgal")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.v1.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let v: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&v).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Problems found validating `doc` against `name`, empty when it conforms.
pub fn violations(name: &str, doc: &Value) -> Vec<String> {
    schema(name).iter_errors(doc).map(|e| format!("{name}: {} at {}", e, e.instance_path())).collect()
}

/// Run `args` twice, plus once sequentially; the three outputs must agree
/// byte for byte and validate against the verb schema (or the error schema
/// on failure). Returns the parsed document and the exit code.
pub fn round_trip(verb: &str, args: &[&str]) -> Result<(Value, i32), String> {
    let mut full = vec![verb];
    full.extend_from_slice(args);
    let a = skewgal(&full);
    let b = skewgal(&full);
    full.push("--sequential");
    let c = skewgal(&full);
    if (a.code, &a.stdout, &a.stderr) != (b.code, &b.stdout, &b.stderr) {
        return Err(format!("{verb}: two runs differ"));
    }
    if (a.code, &a.stdout, &a.stderr) != (c.code, &c.stdout, &c.stderr) {
        return Err(format!("{verb}: sequential run differs"));
    }
    let (text, name) = if a.code == 0 { (&a.stdout, verb) } else { (&a.stderr, "error") };
    let doc: Value = serde_json::from_str(text).map_err(|e| format!("{verb}: output is not JSON ({e}): {text}"))?;
    let bad = violations(name, &doc);
    if !bad.is_empty() {
        return Err(bad.join("; "));
    }
    // Re-serializing the parsed document reproduces the output exactly.
    if serde_json::to_string(&doc).unwrap() + "\n" != *text {
        return Err(format!("{verb}: output does not re-serialize identically"));
    }
    Ok((doc, a.code))
}

pub const S3_TABLE: &str = r#"{"order":3,"table":[[0,1,2],[1,2,0],[2,0,1]]}"#;
pub const ORE_A: &str = r#"{"base":"2^2","frob":1,"coeffs":[[1,0],[0,1],[1,1]]}"#;
pub const ORE_B: &str = r#"{"base":"2^2","frob":1,"coeffs":[[0,1],[1,0]]}"#;

/// One invocation per verb, with the exit code it should produce.
pub fn verb_cases(report_path: &str) -> Vec<(&'static str, Vec<String>, i32)> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let mut cases = vec![
        ("decide", s(&["--group", S3_TABLE, "--alpha", "[0,1,2]", "--K", "2^2", "--L", "2^6", "--sigma", "1"]), 0),
        ("lift-tau", s(&["--K", "2^2", "--L", "2^6", "--sigma", "1"]), 0),
        ("lift-tau", s(&["--K", "2^2", "--L", "2^4", "--sigma", "1"]), 1),
        ("lemma1", s(&["--K", "2^2", "--L", "2^6", "--sigma", "1", "--tau", "3"]), 0),
        ("tower", s(&["--group", r#"{"perm_gens":[[[1,2]],[[1,2,3,4]]]}"#]), 0),
        ("construct-lprime", s(&["--spec", "3:rq", "--spec", "inf:ts", "--p-kernel", "5", "--n-min", "4"]), 0),
        ("verify-report", s(&["--report", report_path]), 0),
        ("level", s(&["--place", "2"]), 0),
        ("level", s(&["--place", "inf"]), 0),
        ("level", s(&["--field", "Q(sqrt:-7)"]), 0),
        ("feasible-13", s(&["--field", "Q"]), 0),
        ("feasible-13", s(&["--field", "Q(sqrt:-1)"]), 0),
        ("selftest", s(&["--suite", "8"]), 0),
    ];
    for op in ["add", "sub", "mul", "right-divmod", "left-divmod", "right-gcd", "left-lcm", "witness"] {
        cases.push(("ore", s(&["--op", op, "--a", ORE_A, "--b", ORE_B]), 0));
    }
    cases
}

/// Write a fresh construction report to a temp file and return its path.
pub fn write_report(tag: &str) -> String {
    let r = skewgal(&["construct-lprime", "--spec", "3:rq", "--spec", "inf:ts", "--p-kernel", "5", "--n-min", "4"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let path = std::env::temp_dir().join(format!("skewgal-report-{}-{tag}.json", std::process::id()));
    std::fs::write(&path, r.stdout).unwrap();
    path.to_string_lossy().into_owned()
}
