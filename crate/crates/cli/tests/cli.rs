use std::process::{Command, Output};

fn nonlocality(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nonlocality"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(csv: &str, row: usize, col: usize) -> f64 {
    csv.lines().nth(row + 1).unwrap().split(',').nth(col).unwrap().parse().unwrap()
}

#[test]
fn scan_default_singlet() {
    let o = nonlocality(&["scan"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert_eq!(csv.lines().count(), 102);
    assert!((field(&csv, 50, 2) - 2.0 * 2f64.sqrt()).abs() <= 1e-9);
    assert!(field(&csv, 50, 4).abs() <= 1e-9);
    assert_eq!(field(&csv, 0, 2), 2.0);
    assert_eq!(field(&csv, 0, 4), 8.0);
}

#[test]
fn scan_is_deterministic_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = nonlocality(&["scan", "--steps", "64", "--state", "mixed", "--visibility", "0.9", "-o", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"theta_start": 0.0, "theta_end": 1.0, "steps": 5, "state": "product"}"#).unwrap();
    let o = nonlocality(&["scan", "--config", cfg.to_str().unwrap(), "--steps", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert_eq!(csv.lines().count(), 4);
    assert_eq!(field(&csv, 2, 0), 1.0);
    // |00⟩ at θ = 0: E(z,z) - E(z,x) + E(x,z) + E(x,x) = 1.
    assert_eq!(field(&csv, 0, 1), 1.0);
}

#[test]
fn degrees_flag_converts_angles() {
    let rad = stdout(&nonlocality(&["scan", "--theta-end", "1.5707963267948966", "--steps", "7"]));
    let deg = stdout(&nonlocality(&["scan", "--degrees", "--theta-end", "90", "--steps", "7"]));
    assert_eq!(rad, deg);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["scan", "--steps", "1"][..],
        &["scan", "--theta-start", "1", "--theta-end", "0.5"],
        &["scan", "--state", "bogus"],
        &["scan", "--state", "product", "--bloch-a", "2,0,0"],
        &["classify"],
        &["frobnicate"],
    ] {
        assert_eq!(nonlocality(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn io_errors_exit_three() {
    let o = nonlocality(&["scan", "-o", "/nonexistent-dir/out.csv"]);
    assert_eq!(o.status.code(), Some(3));
    let o = nonlocality(&["scan", "--config", "/nonexistent-dir/cfg.json"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bounds_table() {
    let o = nonlocality(&["bounds"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = |q: &str| text.lines().find(|l| l.starts_with(q)).unwrap().to_string();
    assert!(row("kappa3 LHVT").contains("6.15840287136e0"));
    assert!(row("CHSH superquantum").ends_with("4.00000000000e0"));
    assert!(row("quadratic non-steering").ends_with("2.00000000000e0"));
    assert!(row("quadratic quantum").ends_with("4.00000000000e0"));
    assert!(row("CHSH quantum").ends_with("2.82842712475e0"));
}

#[test]
fn kappa3_models_csv() {
    let o = nonlocality(&["kappa3-models"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert_eq!(csv.lines().count(), 402);
    assert!(csv.lines().nth(1).unwrap().split(',').nth(1).unwrap().is_empty());
}

#[test]
fn verify_passes_twice_identically() {
    let a = nonlocality(&["verify"]);
    let b = nonlocality(&["verify"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("seed: "));
    let c = nonlocality(&["verify", "--seed", "7"]);
    assert!(stdout(&c).starts_with("seed: 7\n"));
}

#[test]
fn injected_fault_fails_verify() {
    let o = nonlocality(&["verify", "--inject-fault", "flip-s-sign"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL] s2-identity"));
}

#[test]
fn classify_prints_json_report() {
    let o = nonlocality(&["classify", "--theta", "0.05"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "order-3 nonlocal");
    assert_eq!(v["violated_orders"], serde_json::json!([2, 3]));
    let o = nonlocality(&["classify", "--theta", "45", "--degrees"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "order-2 nonlocal");
    let o = nonlocality(&["classify", "--theta", "0.3", "--state", "mixed"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "classical");
}
