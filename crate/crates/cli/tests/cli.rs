use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn problems() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/problems")
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eqtoric")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn problem(name: &str) -> String {
    problems().join(name).to_str().unwrap().to_owned()
}

fn plane(cone: &str, psi: &str) -> String {
    format!(
        r#"{{"version": 1, "coefficients": "QQ", "lattice_rank": 2, "cone": {cone},
"group": {{"free_rank": 1, "torsion": []}}, "psi": {psi}}}"#
    )
}

#[test]
fn orthant_has_four_faces() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "o.json", &plane(r#"{"rays": [[1, 0], [0, 1]]}"#, "[[1, -1]]"));
    let (code, out) = run(&["faces", &f]);
    assert_eq!(code, 0);
    assert!(out.contains("faces (4):"), "{out}");
    assert!(out.contains("codimension-1 faces: {0} {1}"));
    assert!(out.contains("smallest face: dim 0 rays {}"));
    assert!(out.contains("J generators: e[1,1]"));
}

#[test]
fn skew_cone_lists_rays_and_dimensions() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "s.json", &plane(r#"{"rays": [[1, 0], [1, 2]]}"#, "[[1, -1]]"));
    let (code, out) = run(&["--format", "json", "faces", &f]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rays"], serde_json::json!([["1", "0"], ["1", "2"]]));
    let dims: Vec<u64> = v["faces"].as_array().unwrap().iter().map(|f| f["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![0, 1, 1, 2]);
    assert_eq!(v["j_generators"], serde_json::json!(["e[1,1]"]));
}

#[test]
fn inequalities_describe_the_same_cone() {
    let dir = TempDir::new().unwrap();
    let by_rays = write(&dir, "r.json", &plane(r#"{"rays": [[1, 0], [1, 2]]}"#, "[[1, -1]]"));
    let by_ineqs = write(&dir, "i.json", &plane(r#"{"inequalities": [[0, 1], [2, -1]]}"#, "[[1, -1]]"));
    let faces = |f: &str| {
        let v: Value = serde_json::from_str(&run(&["--format", "json", "faces", f]).1).unwrap();
        (v["faces"].as_array().unwrap().len(), v["j_generators"].clone())
    };
    assert_eq!(faces(&by_rays), faces(&by_ineqs));
}

#[test]
fn malformed_files_exit_2_with_a_location() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", "{\n  \"version\": 1,\n  \"cone\" [\n");
    let (code, out) = run(&["faces", &f]);
    assert_eq!(code, 2);
    assert!(out.contains("line 3"), "{out}");
}

#[test]
fn inconsistent_files_exit_3() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "v.json", &plane(r#"{"rays": [[1, 0], [0, 1]]}"#, "[[1, -1, 0]]"));
    assert_eq!(run(&["invariants", &f]).0, 3);
    let (code, out) = run(&["--format", "json", "invariants", &f]);
    assert_eq!(code, 3);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exit_code"], 3);
}

#[test]
fn invariant_presentations() {
    let dir = TempDir::new().unwrap();
    let hyperbola = write(&dir, "h.json", &plane(r#"{"rays": [[1, 0], [0, 1]]}"#, "[[1, -1]]"));
    assert!(run(&["invariants", &hyperbola]).1.contains("A^G = QQ[e[1,1]]"));

    let trivial = write(&dir, "t.json", &plane(r#"{"rays": [[1, 0], [1, 2]]}"#, "[[0, 0]]"));
    let out = run(&["invariants", &trivial]).1;
    assert!(out.contains("A^G = A = QQ[e[1,0], e[1,1], e[1,2]]"), "{out}");
    assert!(out.contains("u0*u2 = u1^2"));

    let laurent = write(
        &dir,
        "l.json",
        r#"{"version": 1, "coefficients": "QQ", "lattice_rank": 1, "cone": {"rays": [[1], [-1]]},
"group": {"free_rank": 1, "torsion": []}, "psi": [[1]]}"#,
    );
    assert!(run(&["invariants", &laurent]).1.contains("A^G = QQ\n"));
}

#[test]
fn exhausted_budgets_exit_4() {
    let (code, out) = run(&["--budget", "3", "faces", &problem("space-gm-mu2.json")]);
    assert_eq!(code, 4, "{out}");
}

#[test]
fn trivialize_and_verify_close_the_loop() {
    let dir = TempDir::new().unwrap();
    for name in ["plane-gm.json", "space-gm-mu2.json", "laurent-gm.json"] {
        let cert = dir.path().join(format!("{name}.cert")).to_str().unwrap().to_owned();
        let (code, out) = run(&["trivialize", &problem(name), "--out", &cert]);
        assert_eq!(code, 0, "{name}: {out}");
        assert!(out.contains("K0 class: "));
        let (code, out) = run(&["verify", &cert, &problem(name)]);
        assert_eq!(code, 0, "{name}: {out}");
    }
}

#[test]
fn reports_do_not_write_files_without_out() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.json", &fs::read_to_string(problem("plane-gm.json")).unwrap());
    let (code, out) = run(&["trivialize", &f]);
    assert_eq!(code, 0);
    assert!(out.contains("weights: [[0]]"));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn same_seed_same_bytes() {
    let dir = TempDir::new().unwrap();
    let cert = |name: &str, seed: &str| {
        let c = dir.path().join(name);
        run(&["trivialize", &problem("space-gm-mu2.json"), "--out", c.to_str().unwrap(), "--seed", seed]);
        fs::read(c).unwrap()
    };
    assert_eq!(cert("a", "5"), cert("b", "5"));
    assert_ne!(cert("a", "5"), cert("c", "6"));
}

#[test]
fn tampering_and_mismatched_problems_fail_verification() {
    let dir = TempDir::new().unwrap();
    let c = dir.path().join("c.json");
    let c = c.to_str().unwrap();
    run(&["trivialize", &problem("plane-gm.json"), "--out", c]);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(c).unwrap()).unwrap();

    assert_eq!(run(&["verify", c, &problem("laurent-gm.json")]).0, 1);

    let entry = &mut v["iso_entries"]["forward"][0][0];
    *entry = Value::String(format!("{} + 3", entry.as_str().unwrap()));
    let bad = write(&dir, "bad.json", &serde_json::to_string(&v).unwrap());
    let (code, out) = run(&["verify", &bad, &problem("plane-gm.json")]);
    assert_eq!(code, 1);
    assert!(out.starts_with("error: verification failed: "), "{out}");
}

#[test]
fn free_modules_are_certified_immediately() {
    let dir = TempDir::new().unwrap();
    let text = plane(r#"{"rays": [[1, 0], [0, 1]]}"#, "[[1, -1]]");
    let text = text.trim_end_matches('}').to_owned() + r#", "module": {"free": [[2], [-1]]}}"#;
    let f = write(&dir, "free.json", &text);
    let c = dir.path().join("c.json");
    let (code, out) = run(&["--format", "json", "trivialize", &f, "--out", c.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["weights"], serde_json::json!([[2], [-1]]));
    assert_eq!(run(&["verify", c.to_str().unwrap(), &f]).0, 0);
}

#[test]
fn partial_results_exit_5_and_replay() {
    let dir = TempDir::new().unwrap();
    let c = dir.path().join("c.json");
    let c = c.to_str().unwrap();
    let (code, out) = run(&["trivialize", &problem("adversarial.json"), "--out", c]);
    assert_eq!(code, 5);
    assert!(out.contains("failed step: factor_cover"));
    assert_eq!(run(&["verify", c, &problem("adversarial.json")]).0, 5);
}

#[test]
fn problems_without_modules_cannot_be_trivialized() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "n.json", &plane(r#"{"rays": [[1, 0], [0, 1]]}"#, "[[1, -1]]"));
    assert_eq!(run(&["trivialize", &f]).0, 3);
}
