//! The `cclab` binary: exit codes, diagnostics and byte-stable output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn cclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cclab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn manifest(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel).display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn analyze_is_deterministic_json() {
    let files = [manifest("corpus/jacobian2.op"), manifest("corpus/product.op")];
    let args: Vec<&str> = ["analyze"].into_iter().chain(files.iter().map(String::as_str)).collect();
    let a = cclab(&args);
    let b = cclab(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["jacobian2", "product"]);
}

#[test]
fn csv_reports_have_one_row_per_operator() {
    let o = cclab(&["analyze", &manifest("corpus/hessian2.op"), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("name,n,shape,zero_integral"));
    assert!(lines[1].starts_with("hessian2,2,"));
}

#[test]
fn parse_errors_exit_2_with_position() {
    let path = manifest("fixtures/errors/syntax.op");
    let o = cclab(&["analyze", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(&format!("{path}:4:20: syntax error")), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cclab(&["analyze"]).status.code(), Some(2));
    assert_eq!(cclab(&["experiment", "no-such-experiment"]).status.code(), Some(2));
    assert_eq!(cclab(&["experiment", "scaling", "--scales", "3,1"]).status.code(), Some(2));
    assert_eq!(cclab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn violated_expectations_exit_1() {
    let dir = scratch("inconsistent");
    let path = dir.join("wrong.op");
    std::fs::write(
        &path,
        "# expect: zero_integral=true\noperator \"wrong\" { dims 1; functions u: R^1; expr = u*u; }\n",
    )
    .unwrap();
    let o = cclab(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("wrong"), "{}", stderr(&o));
}

#[test]
fn findings_go_to_stderr_without_failing() {
    let o = cclab(&["analyze", &manifest("corpus/oscillating_cubic.op")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("finding: oscillating_cubic"), "{}", stderr(&o));
}

#[test]
fn corpus_listing() {
    let o = cclab(&["corpus", "--list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), cclab::corpus::FILES.len());
    assert!(text.lines().any(|l| l == "div_curl.op"));
}

#[test]
fn decompose_prints_levels() {
    let o = cclab(&["decompose", &manifest("corpus/mixed_levels.op")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("== mixed_levels =="));
    assert!(text.contains("level "));
}

#[test]
fn numeric_cross_check() {
    let o = cclab(&[
        "numeric",
        &manifest("corpus/jacobian2.op"),
        &manifest("corpus/wronskian.op"),
        "--grid",
        "64",
        "--trials",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["agrees"] == true));
}

#[test]
fn experiments_write_byte_stable_files() {
    let (a, b) = (scratch("exp-a"), scratch("exp-b"));
    for dir in [&a, &b] {
        let o = cclab(&["experiment", "scaling", "--out", dir.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stderr(&o).contains("PASS"));
    }
    for file in ["scaling.csv", "scaling.json"] {
        let x = std::fs::read(a.join(file)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, std::fs::read(b.join(file)).unwrap(), "{file}");
    }
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(a.join("scaling.json")).unwrap()).unwrap();
    assert_eq!(json["id"], "scaling");
}
