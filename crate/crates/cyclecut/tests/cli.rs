//! Process-level checks of the `cyclecut` binary.

use std::io::Write;
use std::process::Command;

use cyclecut::io::{ResultReport, VerifyReport};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cyclecut"))
}

fn write_temp(name: &str, content: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("cyclecut_test_{name}_{}", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(content.as_bytes()).unwrap();
    path
}

#[test]
fn solve_emits_one_json_report() {
    let inst = write_temp("tri", "p dfvs 3 3 1\n0 1\n1 2\n2 0\n");
    let out = bin().args(["solve"]).arg(&inst).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1);
    let report: ResultReport = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(report.solution.as_ref().map(Vec::len), Some(1));
    assert!(report.leaf_bound_ok);
}

#[test]
fn solve_k_override_and_stats_flag() {
    let inst = write_temp("tri_k", "p dfvs 3 3 1\n0 1\n1 2\n2 0\n");
    let out = bin()
        .args(["solve", "--k", "0", "--stats"])
        .arg(&inst)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("nodes="), "stats summary on stderr: {stderr}");
}

#[test]
fn malformed_input_diagnoses_on_stderr() {
    let inst = write_temp("bad", "p dfvs 3 nope 1\n");
    let out = bin().args(["solve"]).arg(&inst).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("error"), "diagnostic on stderr: {stderr}");
    let report: ResultReport = serde_json::from_str(
        String::from_utf8(out.stdout).unwrap().trim(),
    )
    .unwrap();
    assert!(report.message.is_some());
}

#[test]
fn generate_is_byte_identical_and_solvable() {
    let args = [
        "generate", "--kind", "ordmc", "--n", "30", "--k", "2", "--seed", "11", "--planted",
        "--terminals", "2", "--density", "0.2",
    ];
    let first = bin().args(args).output().unwrap();
    let second = bin().args(args).output().unwrap();
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    let inst = write_temp("gen", &String::from_utf8(first.stdout).unwrap());
    let out = bin().args(["solve"]).arg(&inst).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "planted instance must solve");
}

#[test]
fn verify_subcommand_exit_codes() {
    let inst = write_temp("vtri", "p dfvs 3 3 1\n0 1\n1 2\n2 0\n");
    let good = write_temp("vsol_good", "0\n");
    let bad = write_temp("vsol_bad", "");

    let out = bin().args(["verify"]).arg(&inst).arg(&good).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: VerifyReport =
        serde_json::from_str(String::from_utf8(out.stdout).unwrap().trim()).unwrap();
    assert!(report.valid);

    let out = bin().args(["verify"]).arg(&inst).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: VerifyReport =
        serde_json::from_str(String::from_utf8(out.stdout).unwrap().trim()).unwrap();
    assert!(!report.valid && report.reason.is_some());
}
