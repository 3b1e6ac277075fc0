//! End-to-end checks of the command line driver against the shipped
//! fixture configurations.

use std::path::PathBuf;
use std::process::Command;

use symwave::examples::{ex1_published_lifted_dual, ex2_contexts, ex2_m0, ex2_published_dual, ex2_utility_dual};
use symwave::frames::algorithm1;
use symwave::io::{import_mask, MaskFile};
use symwave::trigpoly::TrigPoly;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read_mask(path: &PathBuf) -> TrigPoly {
    let text = std::fs::read_to_string(path).unwrap();
    let file: MaskFile = serde_json::from_str(&text).unwrap();
    import_mask(&file).unwrap()
}

fn run(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_symwave")).args(args).output().unwrap()
}

#[test]
fn hexagonal_config_runs_and_emits_the_lifted_dual() {
    let out = tempfile::tempdir().unwrap();
    let cfg = fixtures().join("ex1_config.json");
    let res = run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let lifted = read_mask(&out.path().join("lifted_dual_0.json"));
    assert_eq!(lifted, ex1_published_lifted_dual());
}

#[test]
fn det3_config_runs_and_emits_the_frame_bank() {
    let out = tempfile::tempdir().unwrap();
    let cfg = fixtures().join("ex2_config.json");
    let res = run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    for name in ["frame_primal_0.json", "frame_dual_4.json", "report.json", "utility_dual.json"] {
        assert!(out.path().join(name).exists(), "missing {name}");
    }
    let solved = read_mask(&out.path().join("dual_mask.json"));
    assert_eq!(solved, ex2_published_dual());
}

#[test]
fn non_appropriate_dilation_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    // the quincunx-style group element does not commute into this dilation
    let cfg = r#"{
        "dilation": [[2, 1], [0, 2]],
        "group_generators": [[[0, -1], [1, 0]]],
        "center": ["0", "0"],
        "mask": { "dim": 2, "entries": [{ "k": [0, 0], "value": "1" }] },
        "pipeline": "framelike"
    }"#;
    let path = dir.path().join("bad.json");
    std::fs::write(&path, cfg).unwrap();
    let res = run(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(4));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("not appropriate"), "stderr: {err}");
}

#[test]
fn missing_config_is_a_usage_error() {
    let res = run(&["run"]);
    assert_eq!(res.status.code(), Some(4));
}

#[test]
fn shipped_grid_fixture_matches_the_algorithm_output() {
    let published = read_mask(&fixtures().join("ex2_dual_published.json"));
    let (dil, sym) = ex2_contexts();
    let orbits = sym.orbit_decomposition(&dil).unwrap();
    let bank = algorithm1(&ex2_m0(), &ex2_utility_dual(), &dil, &sym, &orbits, 2).unwrap();
    assert_eq!(published, bank.dual[0]);
}

#[test]
fn shipped_mask_fixture_passes_its_calibration_checks() {
    let m0 = read_mask(&fixtures().join("ex1_m0.json"));
    let (dil, sym) = symwave::examples::ex1_contexts();
    assert!(m0.is_symmetric(&sym.group, &sym.center));
    assert!(m0.sum_rule_order(&dil, 4) >= 3);
    assert_eq!(m0, symwave::examples::ex1_m0());
}
