use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is a JSON report")
}

fn record<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["name"] == name)
        .unwrap_or_else(|| panic!("no record {name}"))
}

#[test]
fn verify_fiber_exact_passes() {
    let o = run(&["verify-fiber", "--max-dim", "5", "--exact"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["schema"], "dirac-lab/1");
    assert_eq!(r["status"], "pass");
    let recs = r["records"].as_array().unwrap();
    assert!(recs.len() >= 10);
    assert!(recs.iter().all(|x| x["status"] == "pass"));
    assert!(recs
        .iter()
        .all(|x| !x["anchor"].as_str().unwrap().is_empty()));
    let names: Vec<&str> = recs.iter().map(|x| x["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(
        record(&r, "weitzenboeck_closed_form")["anchor"],
        "𝓡_p φ = κ p(n−p) φ"
    );
}

#[test]
fn verify_fiber_rejects_small_dimension() {
    let o = run(&["verify-fiber", "--max-dim", "1"]);
    assert_eq!(code(&o), 64);
    assert!(o.stdout.is_empty());
    assert_eq!(code(&run(&["verify-fiber", "--max-dim", "9"])), 64);
    assert_eq!(code(&run(&["verify-fiber"])), 64);
}

#[test]
fn injected_sign_flip_fails_volume_check() {
    let o = run(&[
        "verify-fiber",
        "--max-dim",
        "4",
        "--exact",
        "--inject-sign-flip",
    ]);
    assert_eq!(code(&o), 2);
    let r = report(&o);
    assert_eq!(r["status"], "fail");
    let failed: Vec<&str> = r["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["status"] == "fail")
        .map(|x| x["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["volume_action_sign"]);
}

#[test]
fn twistor_two_sphere() {
    let o = run(&["twistor", "--n", "2", "--samples", "100"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(record(&r, "family_dimension")["details"]["dimension"], 8);
    assert_eq!(record(&r, "ricci_derivative")["status"], "skipped");
    assert_eq!(record(&r, "gap_table")["status"], "pass");
    assert_eq!(r["config"]["samples"], 100);
}

#[test]
fn twistor_three_sphere_has_ricci_record() {
    let o = run(&["twistor", "--n", "3", "--samples", "100"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    let ric = record(&r, "ricci_derivative");
    assert_eq!(ric["status"], "pass");
    assert!(ric["max_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn forced_ricci_check_on_two_sphere_is_skipped() {
    let o = run(&["twistor", "--n", "2", "--samples", "10", "--eqtric"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    let ric = record(&r, "ricci_derivative");
    assert_eq!(ric["status"], "skipped");
    assert_eq!(ric["details"]["forced"], true);
    assert!(ric["details"]["reason"]
        .as_str()
        .unwrap()
        .contains("unsupported"));
}

#[test]
fn twistor_rejects_bad_dimension() {
    assert_eq!(code(&run(&["twistor", "--n", "1"])), 64);
    assert_eq!(code(&run(&["twistor", "--n", "3", "--tol", "-1"])), 64);
}

#[test]
fn icosphere_spectrum_with_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let o = run(&[
        "mesh-spectrum",
        "--mesh",
        "icosphere:4",
        "--degree",
        "0",
        "--num",
        "10",
        "--csv-out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "degree,index,eigenvalue,residual");
    assert_eq!(lines.len(), 11);
    let first: f64 = lines[2].split(',').nth(2).unwrap().parse().unwrap();
    assert!((first - 2.0).abs() / 2.0 < 0.02);
    let r = report(&o);
    assert_eq!(record(&r, "multiplicity")["details"]["count"], 3);
    assert_eq!(
        record(&r, "first_positive_eigenvalue")["anchor"],
        "Δ f_i = n f_i"
    );
    assert_eq!(record(&r, "positive_curvature_gap")["status"], "pass");
}

#[test]
fn torus_one_forms_have_two_harmonics() {
    let o = run(&[
        "mesh-spectrum",
        "--mesh",
        "torus:32",
        "--degree",
        "1",
        "--num",
        "8",
    ]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(record(&r, "betti")["details"]["betti"], 2);
    assert_eq!(record(&r, "betti")["status"], "pass");
}

#[test]
fn mesh_input_errors() {
    assert_eq!(code(&run(&["mesh-spectrum", "--mesh", "missing.off"])), 65);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.off");
    std::fs::write(&bad, "OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n1 1 0\n4 0 1 3 2\n").unwrap();
    assert_eq!(
        code(&run(&["mesh-spectrum", "--mesh", bad.to_str().unwrap()])),
        65
    );
    assert_eq!(code(&run(&["mesh-spectrum", "--mesh", "icosphere:x"])), 64);
    assert_eq!(
        code(&run(&[
            "mesh-spectrum",
            "--mesh",
            "icosphere:2",
            "--degree",
            "3"
        ])),
        64
    );
    assert_eq!(
        code(&run(&[
            "mesh-spectrum",
            "--mesh",
            "icosphere:0",
            "--num",
            "12"
        ])),
        64
    );
}

#[test]
fn unreachable_solver_tolerance_exits_three() {
    let o = run(&["mesh-spectrum", "--mesh", "icosphere:2", "--solver-tol", "1e-15"]);
    assert_eq!(code(&o), 3);
    let r = report(&o);
    assert_eq!(r["status"], "fail");
    assert_eq!(record(&r, "solver")["status"], "fail");
}

#[test]
fn off_mesh_runs_without_reference_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("tet.off");
    std::fs::write(
        &p,
        "OFF\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 1 2 3\n3 0 3 2\n",
    )
    .unwrap();
    let o = run(&["mesh-spectrum", "--mesh", p.to_str().unwrap(), "--num", "3"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(record(&r, "betti")["details"]["betti"], 1);
    assert_eq!(record(&r, "multiplicity")["status"], "skipped");
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let run_once = || {
        let o = run(&[
            "mesh-spectrum",
            "--mesh",
            "torus:16",
            "--degree",
            "1",
            "--num",
            "10",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        assert!(o.stdout.is_empty());
        std::fs::read(&out).unwrap()
    };
    assert_eq!(run_once(), run_once());
    let a = run(&["twistor", "--n", "3", "--samples", "15"]);
    let b = run(&["twistor", "--n", "3", "--samples", "15"]);
    assert_eq!(a.stdout, b.stdout);
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("config.json");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"seed": 7, "samples": 5, "tol": 1e-6}"#);
    let o = run(&["--config", &cfg, "twistor", "--n", "2", "--seed", "9"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["config"]["seed"], 9);
    assert_eq!(r["config"]["samples"], 5);
    assert_eq!(r["config"]["tol"], 1e-6);

    let o = run(&["twistor", "--n", "2", "--samples", "3"]);
    let r = report(&o);
    assert_eq!(
        (r["config"]["seed"].as_u64(), r["config"]["tol"].as_f64()),
        (Some(42), Some(1e-8))
    );

    let bad = write_config(dir.path(), r#"{"sede": 7}"#);
    assert_eq!(code(&run(&["--config", &bad, "twistor", "--n", "2"])), 64);
}

#[test]
fn help_exits_cleanly() {
    let o = run(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("mesh-spectrum"));
    assert!(!String::from_utf8_lossy(&o.stdout).contains("inject"));
}
