use std::path::PathBuf;
use std::process::{Command, Output};

fn qmor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmor")).args(args).env_remove("QMOR_BUDGET").output().unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("qmor-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn passing_check_exits_zero() {
    let o = qmor(&["check", "explaw", "C2", "C2", "C2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("qmor-report v1\n"));
    assert!(out.contains("status: pass"));
    assert!(out.contains("summary: pass 1 fail 0 unknown 0"));
}

#[test]
fn failing_hom_exits_one() {
    let file = scratch(
        "fail.qm",
        "algebra A = present < p!, q! | p p = p, q q = q >\nhom z : A -> A = images { p -> 1 - p, q -> 2 q }\n",
    );
    let o = qmor(&["check", "--with", file.to_str().unwrap(), "welldef", "z"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("status: fail"));
}

#[test]
fn parse_errors_exit_three() {
    let file = scratch("bad.qm", "mor M = build C2\n");
    let o = qmor(&["run", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 1"), "{err}");
    assert_eq!(qmor(&["run", "/nonexistent/file.qm"]).status.code(), Some(3));
    assert_eq!(qmor(&["frobnicate"]).status.code(), Some(3));
}

#[test]
fn json_and_report_file() {
    let file = scratch("ok.qm", "mor M = build C2 C2\ncheck coassoc M\ncharacters C2\n");
    let report = std::env::temp_dir().join(format!("qmor-cli-{}-report.json", std::process::id()));
    let o = qmor(&["run", file.to_str().unwrap(), "--json", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["format"], "qmor-report");
    assert_eq!(json["entries"].as_array().unwrap().len(), 2);
    assert_eq!(std::fs::read_to_string(&report).unwrap(), stdout(&o));
}

#[test]
fn budget_flag_is_recorded() {
    let o = qmor(&["check", "classical", "2", "2", "--budget", "777", "--seed", "5"]);
    let out = stdout(&o);
    assert!(out.contains("budget: 777\nseed: 5\n"), "{out}");
}
