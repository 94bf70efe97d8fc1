use std::process::{Command, Output};

use deltalink::bounds::parse_table_csv;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltalink"))
        .args(args)
        .env_remove("DELTA_LINK_CATALOG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table_has_no_diff() {
    let o = run(&["table"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 36);
    assert!(s.contains("| L9a14 | 9^2_13 | 4 or 6 |"));
    assert!(s.contains("| L9a18 | 9^2_10 | 3 |"));
}

#[test]
fn table_csv_round_trips() {
    let o = run(&["table", "--format", "csv", "--quiet"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stderr.is_empty());
    let rows = parse_table_csv(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 34);
    assert!(rows.iter().all(|r| r.matches_expected()));
}

#[test]
fn verify_levels() {
    let o = run(&["verify", "--level", "b", "L9a2.path"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("upper bound: 2"));
    let o = run(&["verify", "L9a40"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("upper bound: 3"));
}

#[test]
fn verify_refuted() {
    let dir = std::env::temp_dir().join(format!("deltalink-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("bad.path");
    std::fs::write(&f, "pathway: L9a2 -> 0_1^3\n").unwrap();
    let o = run(&["verify", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    std::fs::write(&f, "pathway: L9a2 -> Nope\n").unwrap();
    assert_eq!(run(&["verify", f.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn invariants() {
    let o = run(&["invariants", "L9a40"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("mu1122: 5"));
    let o = run(&["invariants", "X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)"]);
    assert!(stdout(&o).contains("alexander: 1 - t + t^2"));
    assert!(stdout(&o).contains("arf: 1"));
    assert_eq!(run(&["invariants", "X(1,1,2,2)"]).status.code(), Some(2));
    assert_eq!(run(&["invariants", "X(1,2,3"]).status.code(), Some(2));
}

#[test]
fn bounds_and_beta1() {
    let o = run(&["bounds", "L9a18"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("beta1_obstruction") && s.contains("u^Δ = 3"));
    let o = run(&["bounds", "L9a14"]);
    assert!(stdout(&o).contains("u^Δ = 4 or 6"));
    let o = run(&["beta1", "L9a18"]);
    assert!(stdout(&o).contains("beta1 = 3"));
    assert_eq!(run(&["beta1", "no-such-file"]).status.code(), Some(2));
}

#[test]
fn catalog_override() {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/../deltalink/data/catalog.txt");
    let o = Command::new(env!("CARGO_BIN_EXE_deltalink"))
        .args(["table", "--quiet"]).env("DELTA_LINK_CATALOG", data).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["--catalog", "/nonexistent/catalog.txt", "table"]);
    assert_eq!(o.status.code(), Some(2));
}
