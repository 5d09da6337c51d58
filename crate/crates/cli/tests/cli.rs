use std::fs;
use std::path::Path;

use cmub_eur::mub::ququart_mubs;
use cmub_eur::{Complex64, QuantumState};
use cmub_eur_cli::{run, EXIT_INVARIANT, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION};
use tempfile::TempDir;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cmub-eur").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn bell_file(dir: &Path) -> String {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let amps = [Complex64::new(s, 0.0), z, z, Complex64::new(s, 0.0)];
    let bell = QuantumState::from_pure(["A", "B"], vec![2, 2], &amps).unwrap();
    let path = dir.join("bell.json");
    fs::write(&path, bell.to_json()).unwrap();
    path.display().to_string()
}

#[test]
fn sweep_writes_expected_grid() {
    let (code, out, _) = cli(&["sweep", "--example", "example1", "--from", "0", "--to", "2pi", "--steps", "201"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "param,lhs,zhang_lower,thm1_lower,thm2_upper,delta_cmub,delta_zhang,purity_a");
    assert_eq!(lines.len(), 202);
    // θ = π/4 is grid point 25
    let row: Vec<f64> = lines[26].split(',').map(|c| c.parse().unwrap()).collect();
    assert!((row[0] - std::f64::consts::FRAC_PI_4).abs() < 1e-11);
    for v in [row[1], row[3], row[4]] {
        assert!(v.abs() < 1e-7, "{v}");
    }
}

#[test]
fn sweep_slices_and_out_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("fig4.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = cli(&[
        "sweep", "--example", "4", "--param", "theta", "--fix", "phi=2pi/3", "--steps", "11", "--out", p,
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 12);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(cli(&["sweep", "--example", "1", "--steps", "1"]).0, EXIT_USAGE);
    assert_eq!(cli(&["sweep", "--example", "1", "--param", "phi"]).0, EXIT_USAGE);
    assert_eq!(cli(&["sweep", "--example", "2", "--fix", "psi=1"]).0, EXIT_USAGE);
    assert_eq!(cli(&["sweep", "--example", "1", "--from", "pie"]).0, EXIT_USAGE);
    assert_eq!(cli(&["random", "--example", "1"]).0, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(cli(&[]).0, EXIT_USAGE);
    assert_eq!(cli(&["--help"]).0, EXIT_OK);
}

#[test]
fn random_is_reproducible_with_manifest() {
    let dir = TempDir::new().unwrap();
    let manifest = dir.path().join("batch.json");
    let args = ["random", "--example", "example6", "--kind", "pure", "--seed", "42", "--count", "25"];
    let mut with_manifest = args.to_vec();
    with_manifest.extend(["--manifest", manifest.to_str().unwrap()]);
    let (c1, a, _) = cli(&with_manifest);
    let (c2, b, _) = cli(&args);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 26);
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(manifest).unwrap()).unwrap();
    assert_eq!(m["seed"], 42);
    assert_eq!(m["kind"], "pure");
    assert_eq!(m["dim"], 16);
    assert_eq!(m["count"], 25);

    let (c, one, _) = cli(&["random", "--count", "1"]);
    assert_eq!(c, EXIT_OK);
    assert_eq!(one.lines().count(), 2);
}

#[test]
fn bounds_for_bell_state() {
    let dir = TempDir::new().unwrap();
    let state = bell_file(dir.path());
    let (code, out, err) = cli(&["bounds", "--state", &state, "--mub", "pauli", "--partition", "1,2,3"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(report["thm1_lower"].as_f64().unwrap().abs() < 1e-9);
    assert!(report["thm2_upper"].as_f64().unwrap().abs() < 1e-9);
    assert!(report["lhs_uncertainty"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn bounds_rejects_bad_inputs() {
    let dir = TempDir::new().unwrap();
    let state = bell_file(dir.path());
    let (code, _, err) = cli(&["bounds", "--state", &state, "--partition", "1|1,2"]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(err.contains("basis 1 assigned twice"), "{err}");

    let sub = QuantumState::maximally_mixed(["A"], vec![2]).unwrap();
    let mut file: serde_json::Value = serde_json::from_str(&sub.to_json()).unwrap();
    file["re"][0][0] = serde_json::json!(0.4);
    let bad = dir.path().join("trace.json");
    fs::write(&bad, file.to_string()).unwrap();
    let (code, _, err) = cli(&["bounds", "--state", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(err.contains("trace"), "{err}");

    let (code, _, _) = cli(&["bounds", "--state", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code, EXIT_VALIDATION);
}

#[test]
fn verify_passes_and_catches_tampering() {
    let (code, out, _) = cli(&["verify"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 16);

    let dir = TempDir::new().unwrap();
    let mut file: serde_json::Value = serde_json::from_str(&ququart_mubs().to_json()).unwrap();
    file["bases"][3] = file["bases"][2].clone();
    let tampered = dir.path().join("tampered.json");
    fs::write(&tampered, file.to_string()).unwrap();
    let (code, out, _) = cli(&["verify", "--mub-file", tampered.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVARIANT);
    assert!(out.lines().any(|l| l.starts_with("FAIL unbiasedness[")), "{out}");
}

#[test]
fn export_mubs_round_trips() {
    let (code, out, _) = cli(&["export-mubs", "--dim", "5"]);
    assert_eq!(code, EXIT_OK);
    let set = cmub_eur::MubSet::from_json(&out).unwrap();
    assert_eq!((set.dim(), set.len()), (5, 6));
    assert_eq!(cli(&["export-mubs", "--mub", "ququart"]).0, EXIT_OK);
    assert_eq!(cli(&["export-mubs", "--dim", "6"]).0, EXIT_VALIDATION);
    assert_eq!(cli(&["export-mubs"]).0, EXIT_USAGE);
}
