use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use monogenic_cst::gaussian_poly::phi_k;
use monogenic_cst::spectral::SpacetimeField;
use monogenic_cst::torus::TorusCoefficients;
use monogenic_cst::verify::VerificationReport;
use monogenic_cst::Multivector;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monogenic-cst"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn help_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(run(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["verify", "isometry", "--bogus"], dir.path()).status.code(), Some(2));
    let o = run(&["verify", "nosuch"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown suite"));
}

#[test]
fn missing_and_malformed_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["transform", "--space", "rm", "--input", "absent.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));

    fs::write(dir.path().join("trunc.json"), "{\"m\": 1, ").unwrap();
    let o = run(&["transform", "--space", "rm", "--input", "trunc.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid JSON"));

    fs::write(dir.path().join("modes.json"), r#"{"m": 1, "modes": [{"k": [1.5], "coeff": {"m": 1, "coeffs": [[1, 0], [0, 0]]}}]}"#).unwrap();
    let o = run(&["transform", "--space", "torus", "--input", "modes.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("modes[0].k"), "{}", stderr(&o));

    let phi = serde_json::to_string(&phi_k(&[0]).unwrap()).unwrap();
    fs::write(dir.path().join("phi0.json"), phi).unwrap();
    let o = run(&["transform", "--space", "rm", "--m", "2", "--input", "phi0.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["transform", "--space", "rm", "--input", "phi0.json", "--x0", "0:1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("start:end:count"));
}

#[test]
fn transform_rm_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let phi = serde_json::to_string(&phi_k(&[1]).unwrap()).unwrap();
    fs::write(dir.path().join("phi1.json"), phi).unwrap();
    let o = run(
        &["transform", "--space", "rm", "--input", "phi1.json", "--x0", "-1:1:3", "--grid", "64", "--out", "out"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let field: SpacetimeField =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/field.json")).unwrap()).unwrap();
    assert_eq!(field.x0_values, vec![-1.0, 0.0, 1.0]);
    assert_eq!(field.grid.points, 64);
    let csv = fs::read_to_string(dir.path().join("out/field.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "x0,x1,re_1,im_1,re_e1,im_e1");
    assert_eq!(lines.count(), 3 * 64);

    // a sampled field is accepted as input too
    let slice = serde_json::to_string(&field.slices[1]).unwrap();
    fs::write(dir.path().join("sampled.json"), slice).unwrap();
    let o = run(&["--format", "csv", "transform", "--space", "rm", "--input", "sampled.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("x0,x1,"));
}

#[test]
fn transform_torus_single_mode() {
    let dir = tempfile::tempdir().unwrap();
    let modes = TorusCoefficients::from_modes(1, [(vec![1], Multivector::one(1))]).unwrap();
    fs::write(dir.path().join("modes.json"), serde_json::to_string(&modes).unwrap()).unwrap();
    let o = run(
        &["transform", "--space", "torus", "--input", "modes.json", "--x0", "0.5:0.5:1", "--grid", "16"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let field: SpacetimeField = serde_json::from_slice(&o.stdout).unwrap();
    let slice = &field.slices[0];
    let norm = (2.0 * std::f64::consts::PI).powf(-0.5) * (-0.5f64).exp();
    for p in 0..16 {
        let x = slice.grid().point(p)[0];
        let v = slice.value(p);
        let phase = num_complex::Complex64::new(0.0, x).exp() * norm;
        let a = phase * 0.5f64.cosh();
        let b = phase * num_complex::Complex64::new(0.0, -0.5f64.sinh());
        assert!((v.coeffs()[0] - a).norm() < 1e-14);
        assert!((v.coeffs()[1] - b).norm() < 1e-14);
    }
}

#[test]
fn basis_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["basis", "--m", "1", "--kmax", "1", "--grid", "32", "--out", "basis"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let entries: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("basis/basis.json")).unwrap()).unwrap();
    let entries = entries.as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[1]["k"], serde_json::json!([1]));
    assert_eq!(entries[1]["series"]["power_scaling"], "inverse_factorial");
    for stem in ["psi_0", "psi_1"] {
        assert!(dir.path().join(format!("basis/{stem}.json")).exists());
        assert!(dir.path().join(format!("basis/{stem}.csv")).exists());
    }
}

#[test]
fn quadrature_selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["quadrature", "--hermite-nodes", "32", "--selftest"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["moments"].as_array().unwrap().len(), 32);
    let o = run(&["quadrature", "--hermite-nodes", "0"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_report_round_trips_and_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["--seed", "7", "verify", "projectors", "--out", "r.json"], dir.path());
    let b = run(&["--seed", "7", "verify", "projectors"], dir.path());
    let c = run(&["--seed", "8", "verify", "projectors"], dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let text = fs::read_to_string(dir.path().join("r.json")).unwrap();
    let rep: VerificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(rep.seed, 7);
    let again = serde_json::to_string_pretty(&rep).unwrap() + "\n";
    assert_eq!(again, text);
}

#[test]
fn params_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p.json"), r#"{"seed": 3, "m": [1], "kmax": 1}"#).unwrap();
    let o = run(&["verify", "intertwine", "--params", "p.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rep: VerificationReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep.seed, 3);
    assert_eq!(rep.checks.len(), 2);

    fs::write(dir.path().join("bad.json"), r#"{"seed": 3, "kmaxx": 1}"#).unwrap();
    let o = run(&["verify", "intertwine", "--params", "bad.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("kmaxx"));
}

#[test]
fn flipped_momentum_sign_fails_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["--momentum-sign", "minus", "verify", "intertwine", "--m", "1", "--kmax", "1"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    let rep: VerificationReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!rep.passed);
    assert!(stderr(&o).contains("FAIL"));
}

#[test]
fn verify_csv_format() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--format", "csv", "verify", "algebra"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("name,computed_re"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}
