//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use serde_json::Value;
use skewgal::selftest::{run_suite, SelftestOptions};

fn suite(id: u8) -> Result<String, String> {
    let r = run_suite(id, &SelftestOptions::default()).expect("suite exists");
    let elapsed = r.elapsed_ms.unwrap_or(0);
    let summary = format!("{} ({} cases, {} ms)", r.name, r.cases, elapsed);
    if !r.passed {
        return Err(format!("{summary}: {} failures; {}", r.failures, r.notes.join("; ")));
    }
    if let Some(budget) = r.budget_ms {
        if elapsed > budget {
            return Err(format!("{summary}: over the {budget} ms budget"));
        }
    }
    Ok(summary)
}

fn cli() -> Result<String, String> {
    let report = write_report("acceptance");
    let cases = verb_cases(&report);
    for (verb, args, code) in &cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (_, got) = round_trip(verb, &args)?;
        if got != *code {
            return Err(format!("{verb} {args:?} exited {got}, expected {code}"));
        }
    }
    let all = skewgal(&["selftest"]);
    if all.code != 0 {
        return Err(format!("selftest exited {}: {}", all.code, all.stderr));
    }
    let doc: Value = serde_json::from_str(&all.stdout).map_err(|e| e.to_string())?;
    let ids: Vec<u64> = doc["suites"].as_array().unwrap().iter().filter_map(|s| s["id"].as_u64()).collect();
    if ids != (1..=9).collect::<Vec<_>>() {
        return Err(format!("selftest ran suites {ids:?}"));
    }
    Ok(format!("{} verb invocations, selftest over suites 1-9", cases.len()))
}

fn main() -> ExitCode {
    let mut failed = 0;
    for id in 1..=10u8 {
        let start = Instant::now();
        let result = if id == 10 { cli() } else { suite(id) };
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("criterion {id:>2}: PASS  {msg}  [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id:>2}: FAIL  {msg}  [{secs:.1}s]");
            }
        }
    }
    println!("{} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
