//! End-to-end CLI checks: exit codes, file formats, and metrics lines.

use std::path::Path;
use std::process::Command;

fn run(args: &[&str], dir: &Path) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_sparsify"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();

    // 0: success.
    let (out, _, code) = run(
        &["gen", "grid", "--w", "4", "--h", "4", "--out", "g.txt"],
        dir,
    );
    assert_eq!(code, 0);
    assert!(out.contains("n=16"));

    // 2: usage errors (missing mandatory seed; bad value).
    let (_, _, code) = run(&["gen", "random", "--n", "5", "--m", "4", "--out", "x"], dir);
    assert_eq!(code, 2);
    let (_, err, code) = run(
        &["gen", "random", "--n", "4", "--m", "99", "--seed", "1", "--out", "x"],
        dir,
    );
    assert_eq!(code, 2);
    assert!(err.contains("error"));

    // 1: verification violation.
    std::fs::write(dir.join("host.txt"), "n 3\n0 1\n1 2\n0 2\n").unwrap();
    std::fs::write(dir.join("sub.txt"), "n 3\n0 1\n1 2\n").unwrap();
    std::fs::write(dir.join("pairs.txt"), "0 2\n").unwrap();
    let (out, _, code) = run(
        &[
            "verify", "--graph", "host.txt", "--h", "sub.txt", "--pairs", "pairs.txt",
            "--budget", "0",
        ],
        dir,
    );
    assert_eq!(code, 1);
    assert!(out.contains("violations=1"));

    // Same audit passes with budget 1.
    let (_, _, code) = run(
        &[
            "verify", "--graph", "host.txt", "--h", "sub.txt", "--pairs", "pairs.txt",
            "--budget", "1",
        ],
        dir,
    );
    assert_eq!(code, 0);
}

#[test]
fn preserver_pipeline_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let (_, _, code) = run(
        &[
            "gen", "layered", "--q", "5", "--layers", "5", "--out", "g.txt",
            "--pairs-out", "p.txt",
        ],
        dir,
    );
    assert_eq!(code, 0);
    let (out, _, code) = run(
        &[
            "preserver", "build", "--algo", "naive", "--graph", "g.txt", "--pairs", "p.txt",
            "--out", "h.txt",
        ],
        dir,
    );
    assert_eq!(code, 0);
    assert!(out.contains("pairs=25"), "metrics line: {out}");
    let (_, _, code) = run(
        &[
            "verify", "--graph", "g.txt", "--h", "h.txt", "--pairs", "p.txt", "--budget", "0",
        ],
        dir,
    );
    assert_eq!(code, 0);
}

#[test]
fn cluster_table_shape() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    run(&["gen", "grid", "--w", "6", "--h", "6", "--out", "g.txt"], dir);
    let (out, _, code) = run(&["cluster", "--graph", "g.txt", "--r", "1"], dir);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "center,r_i,core_size,cluster_size,label"
    );
    for line in lines {
        assert_eq!(line.split(',').count(), 5, "bad row: {line}");
    }
}

#[test]
fn env_constant_override() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    run(
        &["gen", "random", "--n", "40", "--m", "120", "--seed", "2", "--out", "g.txt"],
        dir,
    );
    std::fs::write(dir.join("p.txt"), "0 20\n1 21\n2 22\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_sparsify"))
        .args([
            "preserver", "build", "--algo", "new", "--graph", "g.txt", "--pairs", "p.txt",
            "--out", "h.txt",
        ])
        .env("SPARSIFY_C_DETECT", "not-a-number")
        .current_dir(dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_sparsify"))
        .args([
            "preserver", "build", "--algo", "new", "--graph", "g.txt", "--pairs", "p.txt",
            "--out", "h.txt",
        ])
        .env("SPARSIFY_C_DETECT", "2.5")
        .current_dir(dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sweep_cap_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let (_, err, code) = run(
        &[
            "sweep", "--family", "random", "--algo", "naive", "--sizes", "5000",
            "--pairs", "10", "--seed", "1", "--out", "x.csv",
        ],
        dir,
    );
    assert_eq!(code, 2);
    assert!(err.contains("cap"));
}
