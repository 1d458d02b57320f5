//! Golden-file tests for the command line. Set `WTOWER_BLESS=1` to rewrite
//! the expected outputs after an intentional change.

mod common;

use std::fs;

use common::*;

#[test]
fn golden_outputs() {
    let bless = std::env::var_os("WTOWER_BLESS").is_some();
    let mut failures = Vec::new();
    for case in cases() {
        let got = run(&case.args, &[]);
        let path = golden_path(&case);
        if bless {
            fs::write(&path, &got).unwrap();
            continue;
        }
        let want = fs::read_to_string(&path).unwrap_or_default();
        if got != want {
            failures.push(format!("{}:\n--- want\n{want}--- got\n{got}", case.name));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn error_tags_and_exit_codes() {
    for case in cases().into_iter().filter(|c| c.name.starts_with("error_")) {
        let got = run(&case.args, &[]);
        assert!(!got.starts_with("exit: 0"), "{} succeeded", case.name);
        let stderr = got.split("--- stderr\n").nth(1).unwrap();
        let tag = stderr.strip_prefix("error[").and_then(|s| s.split(']').next());
        let usage = case.name == "error_usage";
        assert!(usage || tag.is_some_and(|t| !t.is_empty() && t.chars().all(|c| c.is_ascii_lowercase() || c == '-')), "{}: {stderr}", case.name);
    }
}

#[test]
fn parse_errors_exit_2_domain_errors_exit_1() {
    let expect = [
        ("error_syntax", 2),
        ("error_label", 2),
        ("error_malformed", 2),
        ("error_longitude_syntax", 2),
        ("error_missing_file", 2),
        ("error_usage", 2),
        ("error_rooted_term", 2),
        ("error_order_mismatch", 1),
        ("error_arf_k", 1),
        ("error_collapse_order0", 1),
        ("error_no_vertex", 1),
        ("error_hypothesis", 1),
    ];
    let cases = cases();
    for (name, code) in expect {
        let case = cases.iter().find(|c| c.name == name).unwrap();
        let got = run(&case.args, &[]);
        assert!(got.starts_with(&format!("exit: {code}\n")), "{name}: {got}");
    }
}

#[test]
fn json_errors_are_machine_readable() {
    let got = run(&["normalize".into(), "--m".into(), "2".into(), "+1*<1,3>".into()], &["--json"]);
    let stdout = got.split("--- stdout\n").nth(1).unwrap().split("--- stderr").next().unwrap();
    let v: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(v["error"], "label-out-of-range");
}
