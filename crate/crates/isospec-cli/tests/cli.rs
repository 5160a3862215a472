//! End-to-end CLI behavior: exit codes, JSON output, determinism, and the
//! env-var/flag tolerance precedence.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_isospec")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env_remove("ISOSPEC_TOL")
        .output()
        .expect("binary runs")
}

fn write(path: &Path, contents: &str) {
    std::fs::write(path, contents).unwrap();
}

fn gallery_pair(dir: &Path, name: &str) -> (PathBuf, PathBuf) {
    let out = run(&["gallery", "get", name, "--out-dir", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");
    (dir.join("a.json"), dir.join("b.json"))
}

#[test]
fn gallery_list_names_five_pairs() {
    let out = run(&["gallery", "list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains("rank-mismatch-diagonal"));
}

#[test]
fn gallery_get_roundtrips_through_classify() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = gallery_pair(dir.path(), "rank-mismatch-diagonal");
    let out = run(&["classify", a.to_str().unwrap(), b.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let expected: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("expected.json")).unwrap())
            .unwrap();
    for (relation, answer) in expected["expected"].as_object().unwrap() {
        assert_eq!(
            &report["verdicts"][relation]["answer"], answer,
            "relation {relation}"
        );
    }
}

#[test]
fn classify_same_file_twice_all_yes() {
    let dir = tempfile::tempdir().unwrap();
    let (a, _) = gallery_pair(dir.path(), "nilpotent-cubic-transpose");
    let out = run(&["classify", a.to_str().unwrap(), a.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for relation in ["identical", "isometric", "super_identical"] {
        assert_eq!(report["verdicts"][relation]["answer"], "Yes", "{relation}");
    }
}

#[test]
fn malformed_input_exits_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    write(&bad, r#"{"d": 2, "entries": [[[1,0]],[[0,0],[0,0]]]}"#);
    let ok = dir.path().join("ok.json");
    write(&ok, r#"{"d": 1, "entries": [[[1,0]]]}"#);
    let out = run(&["classify", bad.to_str().unwrap(), ok.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("entries"), "stderr: {msg}");

    let missing = dir.path().join("nope.json");
    let out = run(&["classify", missing.to_str().unwrap(), ok.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cluster_ambiguity_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("close.json");
    write(
        &path,
        r#"{"d": 3, "entries": [[[0,0],[0,0],[0,0]],[[0,0],[0.000003,0],[0,0]],[[0,0],[0,0],[1,0]]]}"#,
    );
    let out = run(&["classify", path.to_str().unwrap(), path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn unknown_gallery_name_exits_2() {
    let out = run(&["gallery", "get", "no-such-pair", "--out-dir", "/tmp"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_grid_string_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (a, _) = gallery_pair(dir.path(), "similar-not-ip-2x2");
    let out = run(&[
        "pseudospectra",
        a.to_str().unwrap(),
        "--grid",
        "0,1,0",
        "--out",
        dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "pseudospectra",
        a.to_str().unwrap(),
        "--grid",
        "1,0,-1,1,4,4",
        "--out",
        dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn grid_csv_shape_and_corner_values() {
    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.json");
    write(
        &zero,
        r#"{"d": 2, "entries": [[[0,0],[0,0]],[[0,0],[0,0]]]}"#,
    );
    let csv = dir.path().join("grid.csv");
    let out = run(&[
        "pseudospectra",
        zero.to_str().unwrap(),
        "--grid",
        "-1,1,-1,1,3,3",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "re,im,smin");
    assert_eq!(lines.len(), 10);
    // Corner node (-1, -1): smin = |z| = sqrt 2.
    let first: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first[0], -1.0);
    assert_eq!(first[1], -1.0);
    assert!((first[2] - 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn comparison_grid_has_gap_column() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = gallery_pair(dir.path(), "frobenius-gap-4x4");
    let csv = dir.path().join("cmp.csv");
    let out = run(&[
        "pseudospectra",
        a.to_str().unwrap(),
        "--pair",
        b.to_str().unwrap(),
        "--grid",
        "-1,2,-1,1,6,5",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "re,im,smin_a,smin_b,rel_gap");
    for line in lines {
        let gap: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!(gap <= 1e-10, "matched pair should have tiny gaps: {line}");
    }
}

#[test]
fn falsify_runs_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = gallery_pair(dir.path(), "same-minpoly-z2");
    let args = [
        "falsify",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--polys",
        "60",
        "--seed",
        "7",
        "--z-samples",
        "120",
        "--json",
    ];
    let out1 = run(&args);
    let out2 = run(&args);
    assert!(out1.status.success());
    assert_eq!(out1.stdout, out2.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&out1.stdout).unwrap();
    assert_eq!(doc["polynomials"]["verdict"], "Falsified");
    assert_eq!(doc["pseudospectra"]["verdict"], "Falsified");
}

#[test]
fn tolerance_flag_beats_env_var() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = gallery_pair(dir.path(), "similar-not-ip-2x2");

    let out = Command::new(bin())
        .args(["classify", a.to_str().unwrap(), b.to_str().unwrap(), "--json"])
        .env("ISOSPEC_TOL", "1e-3")
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdicts"]["identical"]["tolerance_used"], 1e-3);

    let out = Command::new(bin())
        .args([
            "classify",
            a.to_str().unwrap(),
            b.to_str().unwrap(),
            "--json",
            "--tol",
            "1e-7",
        ])
        .env("ISOSPEC_TOL", "1e-3")
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdicts"]["identical"]["tolerance_used"], 1e-7);

    let out = Command::new(bin())
        .args(["classify", a.to_str().unwrap(), b.to_str().unwrap()])
        .env("ISOSPEC_TOL", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn matrix_files_roundtrip_exact_doubles() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    // Awkward doubles that must survive a parse/serialize cycle exactly.
    write(
        &path,
        r#"{"d":2,"entries":[[[0.1,0.30000000000000004],[-1e-17,2.2250738585072014e-308]],[[9007199254740993e0,-0.0],[3.141592653589793,1.7976931348623157e308]]]}"#,
    );
    let m: isospec::Matrix = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let again: isospec::Matrix =
        serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(m[(i, j)].re.to_bits(), again[(i, j)].re.to_bits());
            assert_eq!(m[(i, j)].im.to_bits(), again[(i, j)].im.to_bits());
        }
    }
}
