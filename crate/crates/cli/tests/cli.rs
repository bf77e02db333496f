use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nearfermi"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nearfermi-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn joint_spectrum_has_thirty_points() {
    let dir = scratch("joint");
    let out = run(&[
        "joint-spectrum", "--gamma", "1", "--c", "1", "--eps", "0.01", "--hbar", "0.001", "--n-max", "9", "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.join("joint_spectrum.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("lambda1,lambda2"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 30);
    assert!(rows[0].starts_with("1.5,"));
}

#[test]
fn polyads_output_is_deterministic() {
    let dir = scratch("polyads");
    let args = ["polyads", "--hbar", "0.01", "--eps", "0.1", "--n-max", "6", "--out", dir.to_str().unwrap()];
    assert!(run(&args).status.success());
    let first = fs::read(dir.join("polyads.csv")).unwrap();
    assert!(run(&args).status.success());
    assert_eq!(first, fs::read(dir.join("polyads.csv")).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("N,j,mu\n0,0,"));
    assert_eq!(text.lines().count(), 1 + (0..=6).map(|n| n / 2 + 1).sum::<usize>());
}

#[test]
fn normal_form_reports_mu() {
    let out = run(&["normal-form", "--gamma", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.starts_with("# mu = ")).unwrap();
    let mu: f64 = line["# mu = ".len()..].split(',').next().unwrap().parse().unwrap();
    assert!((mu - 1.0 / (4.0 * 2f64.sqrt())).abs() < 1e-12);
    assert!(text.lines().any(|l| l.ends_with(": 2 0 0 1 0 0")));
}

#[test]
fn spectrum_writes_both_sources() {
    let dir = scratch("spectrum");
    let out = run(&["spectrum", "--gamma", "0", "--hbar", "0.02", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let overlay = fs::read_to_string(dir.join("spectrum_overlay.csv")).unwrap();
    assert!(overlay.starts_with("energy,source\n"));
    assert!(overlay.contains(",galerkin") && overlay.contains(",normal-form"));
    let nf = fs::read_to_string(dir.join("nf_spectrum.csv")).unwrap();
    assert_eq!(nf.lines().nth(1), Some("0.03"));
}

#[test]
fn config_errors_exit_with_two() {
    let out = run(&["error-scaling", "--hbar-list", "0.01,0.02,0.005"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["polyads", "--energy-factor", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = scratch("badpot");
    let path = dir.join("v.txt");
    fs::write(&path, "2 0 : 0.5\n0 2 :\n").unwrap();
    let out = run(&["polyads", "--potential-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn numerical_errors_exit_with_three() {
    // Not a 1:2 resonance.
    let dir = scratch("nonres");
    let path = dir.join("v.txt");
    fs::write(&path, "2 0 : 0.5\n0 2 : 0.5\n3 0 : 1\n").unwrap();
    let out = run(&["normal-form", "--potential-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn check_min_prints_certificate() {
    let out = run(&["check-min", "--gamma", "1", "--c", "1", "--eps", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("unique minimum certified: true"));
    let out = run(&["check-min", "--eps", "-0.6"]);
    assert_eq!(out.status.code(), Some(2));
}
