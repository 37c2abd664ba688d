use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tetra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tetra")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

/// The report minus its timing.
fn stable(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

fn write_ab(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const S_AB: &str = "# S: (i, j, k) -> (i + j + k, k, j)\n1 1 1|0\n0 0 1|0\n0 1 0|0\n";

#[test]
fn simplex_check_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_ab(dir.path(), "S.ab", S_AB);
    let out = tetra(&["simplex", "check", "--n", "3", "--ab", &s]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["check"], "3-simplex");
    assert_eq!(r["status"], "pass");
    assert_eq!(r["points"], 64);
    assert_eq!(r["invocation"][1], "simplex");
}

#[test]
fn simplex_check_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let t = write_ab(dir.path(), "T.ab", "1 1 1|1\n0 0 1|1\n0 1 0|1\n");
    let out = tetra(&["simplex", "check", "--n", "3", "--ab", &t]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["status"], "fail");
    let first = &r["witnesses"][0];
    assert_eq!(first["col"].as_array().unwrap().len(), 6);
}

#[test]
fn malformed_ab_file_exits_2_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_ab(dir.path(), "bad.ab", "1 1 1|0\n0 2 1|0\n0 1 0|0\n");
    let out = tetra(&["simplex", "check", "--n", "3", "--ab", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn verify_case_is_certified_and_deterministic() {
    let a = tetra(&["tetra", "verify-case", "--case", "4"]);
    let b = tetra(&["tetra", "verify-case", "--case", "4"]);
    assert_eq!(a.status.code(), Some(0));
    let (ra, rb) = (report(&a), report(&b));
    assert_eq!(ra["status"], "certified");
    assert_eq!(stable(ra), stable(rb));
}

#[test]
fn sampling_is_seeded() {
    let args = ["tetra", "sample", "--case", "2", "--count", "20", "--seed", "7"];
    let a = stable(report(&tetra(&args)));
    assert_eq!(a["status"], "pass");
    assert_eq!(a["seed"], 7);
    assert_eq!(a, stable(report(&tetra(&args))));
}

#[test]
fn partition_symbolic_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("z.csv");
    let out = tetra(&[
        "lattice",
        "partition",
        "--dims",
        "1,1,1",
        "--symbolic",
        "--csv",
        csv.to_str().unwrap(),
        "--samples",
        "1/2,2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), "a,Z\n1/2,6\n2,12\n");

    let out = tetra(&["lattice", "partition", "--dims", "2,2,2", "--symbolic"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "pass");
    assert!(r.to_string().contains("128*a^8 + 1536*a^6 + 4864*a^4 + 1536*a^2 + 128"));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = tetra(&["--out", path.to_str().unwrap(), "op", "rank", "--op", "S3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["details"]["rank"], 4);
}

#[test]
fn yang_baxter_interpretations() {
    let all_r = report(&tetra(&["yb", "verify", "--interpretation", "all-r", "--count", "20"]));
    assert_eq!(all_r["status"], "certified");
    let out = tetra(&["yb", "verify", "--interpretation", "literal", "--count", "20"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(tetra(&["lattice", "partition", "--dims", "3,3,3", "--symbolic"]).status.code(), Some(2));
    assert_eq!(tetra(&["trace", "partial", "--op", "H4", "--site", "9"]).status.code(), Some(2));
    assert_eq!(tetra(&["op", "det"]).status.code(), Some(2));
    assert_eq!(tetra(&["--help"]).status.code(), Some(0));
}

#[test]
fn rlm_accepts_a_parameter_list() {
    let rlm = |params: &str| tetra(&["lattice", "rlm", "--r", "S2", "--l", "S2", "--m", "S2", "--params", params]);
    let on = rlm("1/5,1/2,1/3");
    assert_eq!(on.status.code(), Some(0), "{}", String::from_utf8_lossy(&on.stderr));
    assert_eq!(report(&on)["invocation"][10], "1/5,1/2,1/3");
    assert_eq!(rlm("-1/2,1/3,0").status.code(), Some(1));
    assert_eq!(tetra(&["lattice", "rlm", "--r", "S3", "--l", "S3", "--m", "S3"]).status.code(), Some(2));
}
