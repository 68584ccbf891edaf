use std::path::Path;
use std::process::{Command, Output};

use gre_cli::{run_suite, Suite, SuiteConfig};
use serde_json::Value;

fn gre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gre")).args(args).output().unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn counterexample_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ce.json");
    let o = gre(&["verify", "counterexample", "--p0", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out);
    assert_eq!(v["passed"], Value::Bool(true));
    let failures = &v["reports"][1]["statistics"][1]["failure_set"];
    let expected: Vec<u64> = (1..=20).filter(|a| a % 5 != 0).collect();
    assert_eq!(failures, &serde_json::to_value(expected).unwrap());
}

#[test]
fn theorem2_recovers_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t2.json");
    let o = gre(&["verify", "theorem2", "--eta", "1.5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = read_json(&out);
    let stats = v["reports"][0]["statistics"].as_array().unwrap();
    let summary = stats.last().unwrap();
    for key in ["max_wintner_residual", "max_carmichael_residual"] {
        assert!(summary[key].as_f64().unwrap() < 1e-9, "{key}");
    }
}

#[test]
fn csum_identities_with_small_sieve() {
    let o = gre(&["verify", "csum-identities", "--sieve-limit", "300"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let stat = &v["reports"][0]["statistics"][0];
    assert_eq!(stat["mismatches"], 0);
    assert_eq!(stat["q_max"], 256);
}

#[test]
fn usage_and_resource_errors() {
    assert_eq!(gre(&["theorem2", "--eta", "1.0"]).status.code(), Some(2));
    assert_eq!(gre(&["no-such-suite"]).status.code(), Some(2));
    assert_eq!(gre(&["theorem1", "--eta", "-1"]).status.code(), Some(2));
    assert_eq!(gre(&["counterexample", "--p0", "4"]).status.code(), Some(2));
    assert_eq!(gre(&["theorem4", "--sieve-limit", "100"]).status.code(), Some(3));
    assert_eq!(gre(&["theorem1", "--sieve-limit", "200000000"]).status.code(), Some(3));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["transforms-roundtrip", "theorem2", "counterexample", "remark8"] {
        let a = dir.path().join(format!("{suite}-a.json"));
        let b = dir.path().join(format!("{suite}-b.json"));
        for p in [&a, &b] {
            gre(&[suite, "--sieve-limit", "200000", "--seed", "9", "--out", p.to_str().unwrap()]);
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{suite}");
    }
}

#[test]
fn seed_changes_sampled_reports() {
    let a = gre(&["theorem2", "--sieve-limit", "1000", "--seed", "1"]).stdout;
    let b = gre(&["theorem2", "--sieve-limit", "1000", "--seed", "2"]).stdout;
    assert_ne!(a, b);
}

#[test]
fn csv_output() {
    let o = gre(&["counterexample", "--p0", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("a,lhs_re,lhs_im,rhs_re,rhs_im,equal"));
    assert_eq!(text.lines().count(), 13);

    let o = gre(&["remark7", "--sieve-limit", "20000", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("claim,index,key,value"));
    assert!(text.lines().any(|l| l.ends_with(",verdict,pass")));
}

#[test]
fn zero_expansions_report_the_failing_trend() {
    // a = 2 partial sums are not monotone at decade checkpoints
    let mut cfg = SuiteConfig::new(Suite::ZeroExpansions);
    cfg.sieve_limit = 1_000_000;
    let outcome = run_suite(&cfg).unwrap();
    assert!(!outcome.passed());
    let v = outcome.to_json(&cfg);
    let stats = v["reports"][0]["statistics"].as_array().unwrap();
    let failing: Vec<u64> = stats
        .iter()
        .filter(|s| s["decreasing"] == Value::Bool(false))
        .map(|s| s["a"].as_u64().unwrap())
        .collect();
    assert_eq!(failing, vec![2, 2, 2]);
    assert_eq!(gre(&["zero-expansions"]).status.code(), Some(1));
}

#[test]
fn every_suite_runs_at_small_sieve() {
    for suite in [
        "csum-identities",
        "transforms-roundtrip",
        "theorem1",
        "theorem3",
        "theorem4",
        "corollary1",
        "corollary2",
        "remark7",
        "remark8",
    ] {
        let o = gre(&[suite, "--sieve-limit", "100000"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&o.stderr));
    }
}
