use std::path::{Path, PathBuf};
use std::process::Command;

use linfty_cli::fixture::{load, parse_fixture, parse_raw, serialize};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn linfty(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_linfty"))
        .args(args)
        .current_dir(root())
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn corpus() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(root().join("fixtures"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

#[test]
fn documented_examples() {
    assert_eq!(linfty(&["validate", "fixtures/fix_a"]).0, 0);

    let (code, _, _) = linfty(&["mc", "fixtures/fix_b", "--element", "x"]);
    assert_eq!(code, 0);
    let (_, json, _) = linfty(&["mc", "fixtures/fix_b", "--element", "x", "--report", "-"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["sections"][0]["details"]["residual"], "0");

    let (code, out, _) = linfty(&["prop-key", "fixtures/cech_fixb_ladder", "--mc", "x"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("quasi-isomorphism"));
}

#[test]
fn exit_codes_separate_failures_from_input_errors() {
    assert_eq!(linfty(&["mc", "fixtures/fix_a", "--element", "a"]).0, 1);
    assert_eq!(linfty(&["validate", "fixtures/jacobi_violation"]).0, 1);
    assert_eq!(linfty(&["adapted-mc", "fixtures/nonadapted"]).0, 1);
    assert_eq!(linfty(&["resolution-check", "fixtures/perturbed_ladder"]).0, 1);
    // 2x is not MC on FIX-B: a mathematical failure, not an input error
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(root().join("fixtures/fix_b.json"))
        .unwrap()
        .replace(r#""defaults": {"#, r#""elements": { "two_x": { "structure": "B", "value": { "x": "2" } } }, "defaults": {"#);
    let p = dir.path().join("two_x.json");
    std::fs::write(&p, text).unwrap();
    assert_eq!(linfty(&["mc", p.to_str().unwrap(), "--element", "two_x"]).0, 1);

    for args in [
        &["validate", "fixtures/missing"][..],
        &["mc", "fixtures/fix_b", "--element", "nope"],
        &["mc", "fixtures/fix_b", "--element", "c"],
        &["mc", "fixtures/fix_a"],
        &["frobnicate"],
        &["mc", "fixtures/fix_b", "--max-arity", "many"],
    ] {
        let (code, _, err) = linfty(args);
        assert_eq!(code, 2, "{args:?}: {err}");
    }
}

#[test]
fn help_is_not_an_error() {
    assert_eq!(linfty(&["--help"]).0, 0);
    assert_eq!(linfty(&["prop-key", "--help"]).0, 0);
    assert_eq!(linfty(&[]).0, 2);
}

#[test]
fn floats_are_rejected_at_the_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(root().join("fixtures/fix_b.json"))
        .unwrap()
        .replace(r#"{ "c": "1" }"#, r#"{ "c": 1.0 }"#);
    let p = dir.path().join("float.json");
    std::fs::write(&p, text).unwrap();
    let (code, _, err) = linfty(&["validate", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("exact scalars required"), "{err}");
    assert!(err.contains("line "), "{err}");
}

#[test]
fn corpus_round_trips_canonically() {
    for p in corpus() {
        let text = std::fs::read_to_string(&p).unwrap();
        let raw = parse_raw(&text).unwrap();
        let canonical = serialize(&raw);
        assert_eq!(parse_raw(&canonical).unwrap(), raw, "{}", p.display());
        assert_eq!(serialize(&parse_raw(&canonical).unwrap()), canonical);
        // the canonical text builds the same objects
        let a = load(&p).unwrap();
        let b = parse_fixture(&canonical).unwrap();
        assert_eq!(a.structures, b.structures);
        assert_eq!(a.ladders.len(), b.ladders.len());
    }
}

#[test]
fn twist_writes_a_loadable_flat_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("twisted.json");
    let (code, _, err) = linfty(&["twist", "fixtures/fix_b", "--element", "x", "--output", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let twisted = load(&out).unwrap();
    assert!(twisted.structures["B"].is_flat());
    assert_eq!(linfty(&["validate", out.to_str().unwrap()]).0, 0);
    assert_eq!(linfty(&["cohomology", out.to_str().unwrap()]).0, 0);
}

#[test]
fn fixture_paths_resolve_three_ways() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(root().join("fixtures/fix_a.json")).unwrap();
    std::fs::write(dir.path().join("fixture.json"), &text).unwrap();
    assert_eq!(linfty(&["validate", dir.path().to_str().unwrap()]).0, 0);
    assert_eq!(linfty(&["validate", "fixtures/fix_a.json"]).0, 0);
    assert_eq!(linfty(&["validate", "fixtures/fix_a"]).0, 0);
}

#[test]
fn report_files_do_not_depend_on_their_location() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("sub-b.json"));
    for p in [&a, &b] {
        let (code, human, _) = linfty(&["cohomology", "fixtures/fix_c", "--report", p.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(human.contains("PASSED in"));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(!text.contains("PASSED in"));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["command"], "cohomology");
    assert_eq!(v["passed"], true);
}

#[test]
fn dangling_references_name_the_field() {
    let text = std::fs::read_to_string(root().join("fixtures/cech_fixb_ladder.json"))
        .unwrap()
        .replace(r#""morphism": "U""#, r#""morphism": "V""#);
    let err = parse_fixture(&text).unwrap_err().to_string();
    assert!(err.contains("ladders.U") && err.contains("unknown morphism `V`"), "{err}");
}
