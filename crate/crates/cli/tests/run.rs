use std::process::Command as Process;

use ovp_cli::{
    run, ClaimFilter, Command, Format, RunConfig, EXIT_BUDGET, EXIT_FAILED, EXIT_OK, EXIT_UNKNOWN_ID, EXIT_USAGE,
};
use ovp_core::HarnessConfig;

fn exec(command: Command, format: Format) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(&RunConfig { command, format }, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn claims(id: &str) -> Command {
    Command::VerifyClaims {
        filter: ClaimFilter { id: Some(id.into()), category: None },
        harness: HarnessConfig::default(),
        catalog: None,
    }
}

#[test]
fn expand_partition_numbers() {
    let (code, out) = exec(Command::Expand { eta: "f1^-1".into(), order: 10, modulus: None }, Format::Text);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "exact order 10; 1 1 2 3 5 7 11 15 22 30 42");
    let (_, out) = exec(Command::Expand { eta: "f1^-1".into(), order: 10, modulus: Some(4) }, Format::Text);
    assert_eq!(out.trim(), "mod 4 order 10; 1 1 2 3 1 3 3 3 2 2 2");
}

#[test]
fn error_exit_codes() {
    assert_eq!(exec(Command::Expand { eta: "f1^^2".into(), order: 5, modulus: None }, Format::Text).0, EXIT_USAGE);
    assert_eq!(exec(Command::Expand { eta: "f1".into(), order: 5, modulus: Some(0) }, Format::Text).0, EXIT_USAGE);
    assert_eq!(
        exec(Command::Expand { eta: "f1".into(), order: 10_000_000, modulus: None }, Format::Text).0,
        EXIT_BUDGET
    );
    assert_eq!(
        exec(Command::VerifyIdentities { id: Some("nope".into()), order: None }, Format::Text).0,
        EXIT_UNKNOWN_ID
    );
    assert_eq!(exec(claims("nope*"), Format::Text).0, EXIT_UNKNOWN_ID);
    assert_eq!(exec(Command::OracleCompare { spec: "8,4".into(), n_max: 5 }, Format::Text).0, EXIT_USAGE);
}

#[test]
fn identities_pass() {
    let (code, out) = exec(Command::VerifyIdentities { id: None, order: Some(200) }, Format::Text);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.lines().last().unwrap().contains("0 failed"));
}

#[test]
fn oracle_compare_rows() {
    let (code, out) = exec(Command::OracleCompare { spec: "4,8".into(), n_max: 40 }, Format::Text);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().filter(|l| l.ends_with("yes")).count(), 41);
}

#[test]
fn failing_claim_is_named() {
    let (code, out) = exec(claims("3b2*"), Format::Text);
    assert_eq!(code, EXIT_FAILED);
    let last = out.lines().last().unwrap();
    assert!(last.ends_with("first failure: 3b2a"), "{last}");
}

#[test]
fn text_and_structured_agree() {
    let (code_t, text) = exec(claims("t4*"), Format::Text);
    let (code_s, json) = exec(claims("t4*"), Format::Structured);
    assert_eq!(code_t, code_s);
    let text_verdicts: Vec<&str> = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with("summary"))
        .map(|l| {
            if l.contains("PASS") {
                "pass"
            } else if l.contains("FAIL") {
                "fail"
            } else {
                "skipped"
            }
        })
        .collect();
    let records: Vec<serde_json::Value> = json.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let json_verdicts: Vec<String> = records
        .iter()
        .filter(|r| r["kind"] == "claim")
        .map(|r| r["verdict"]["status"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(text_verdicts, json_verdicts);
    let summary = records.last().unwrap();
    assert_eq!(summary["kind"], "summary");
    assert_eq!(summary["first_failure"], "t44a");
    for r in records.iter().filter(|r| r["kind"] == "claim") {
        for field in ["id", "params", "n_max", "verdict", "counterexample_n", "elapsed_ms"] {
            assert!(r.get(field).is_some(), "{field} missing");
        }
    }
}

#[test]
fn all_skipped_for_budget() {
    let cmd = Command::VerifyClaims {
        filter: ClaimFilter { id: Some("t15a".into()), category: None },
        harness: HarnessConfig { shrink_to_budget: false, ..HarnessConfig::default() },
        catalog: None,
    };
    assert_eq!(exec(cmd, Format::Text).0, EXIT_BUDGET);
}

#[test]
fn core_suite_passes() {
    let (code, out) = exec(Command::Core, Format::Text);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("oracle_6_12"));
}

#[test]
fn binary_entry_point() {
    let out = Process::new(env!("CARGO_BIN_EXE_ovp"))
        .args(["expand", "--eta", "f1^-2 * f2", "--order", "6"])
        .output()
        .unwrap();
    assert!(out.status.success());
    // overpartitions
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "exact order 6; 1 2 4 8 14 24 40");

    let bad = Process::new(env!("CARGO_BIN_EXE_ovp")).args(["verify-claims", "--id", "missing"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_UNKNOWN_ID));
}
