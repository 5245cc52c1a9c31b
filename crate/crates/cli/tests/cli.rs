use std::process::{Command, Output};

use ptmetro_cli::{run_scan, Axis, Model, Params, Quantity, ScanSpec};

fn ptmetro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptmetro"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fig_writes_series_sidecars_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ptmetro(&["fig", "2", "--out", out, "--emit-plot"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let csv = std::fs::read_to_string(dir.path().join("fig2_A.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,F");
    assert_eq!(lines.len(), 2001);
    assert!(!csv.contains('\r'));
    assert!(lines[1].starts_with("2.5000000000000001e-2,"));
    assert!(lines[2000].starts_with("5.0000000000000000e1,"));

    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig2_A.json")).unwrap()).unwrap();
    assert_eq!(meta["params"]["caption"], "a=10√2, b=10, γ=0.1");
    assert_eq!(meta["params"]["b"], 10.0);
    assert_eq!(meta["quantity"], "F");
    assert_eq!(meta["grid"]["points"], 2000);
    assert!(dir.path().join("fig2_B.csv").exists());
    let gp = std::fs::read_to_string(dir.path().join("fig2.gp")).unwrap();
    assert!(gp.contains("'fig2_A.csv' using 1:2"));
}

#[test]
fn rate_figures_and_shared_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for id in ["3", "6"] {
        assert!(ptmetro(&["fig", id, "--out", out, "--points", "50"]).status.success());
    }
    let b3 = std::fs::read_to_string(dir.path().join("fig3_B.csv")).unwrap();
    let b6 = std::fs::read_to_string(dir.path().join("fig6_B.csv")).unwrap();
    assert!(b6.starts_with("t,F_over_t\n"));
    for (l3, l6) in b3.lines().skip(1).zip(b6.lines().skip(1)) {
        let (t, f) = l3.split_once(',').unwrap();
        let (t6, r) = l6.split_once(',').unwrap();
        assert_eq!(t, t6);
        let (t, f, r): (f64, f64, f64) = (t.parse().unwrap(), f.parse().unwrap(), r.parse().unwrap());
        assert_eq!(f / t, r);
    }
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig6_A.json")).unwrap()).unwrap();
    assert_eq!(meta["params"]["regime"]["kind"], "exceptional_point");
}

#[test]
fn scan_output_is_bit_stable_and_thread_independent() {
    let args = [
        "scan",
        "--quantity",
        "F",
        "--a",
        "0.8",
        "--b",
        "-0.8",
        "--points",
        "300",
    ];
    let first = stdout(&ptmetro(&args));
    let again = stdout(&ptmetro(&args));
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    let sequential = stdout(&ptmetro(&seq_args));
    assert_eq!(first, again);
    assert_eq!(first, sequential);
    assert_eq!(first.lines().count(), 301);
}

#[test]
fn parallel_and_sequential_scans_are_bitwise_identical() {
    let params = Params {
        a: 10.0 * std::f64::consts::SQRT_2,
        b: 10.0,
        ..Params::default()
    };
    for quantity in [Quantity::Qfi, Quantity::Classical, Quantity::ReRho12] {
        let spec = ScanSpec {
            model: Model::Feedback,
            axis: Axis::T,
            quantity,
            params,
            grid: params.grid().unwrap(),
        };
        let par = run_scan(&spec, true).unwrap();
        let seq = run_scan(&spec, false).unwrap();
        assert!(par
            .values
            .iter()
            .zip(&seq.values)
            .all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}

#[test]
fn scan_rho11_matches_closed_form() {
    let o = ptmetro(&[
        "scan",
        "--quantity",
        "rho11",
        "--t-min",
        "0",
        "--t-max",
        "10",
        "--points",
        "11",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("t,rho11\n"));
    for line in text.lines().skip(1) {
        let (t, v) = line.split_once(',').unwrap();
        let (t, v): (f64, f64) = (t.parse().unwrap(), v.parse().unwrap());
        assert!((v - (1.0 - 0.5 * (-0.1 * t).exp())).abs() < 1e-15);
    }
}

#[test]
fn scan_writes_files_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ptmetro(&[
        "scan",
        "--model",
        "probe",
        "--axis",
        "n",
        "--quantity",
        "bound",
        "--t-min",
        "1",
        "--t-max",
        "8",
        "--points",
        "8",
        "--out",
        out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("scan_probe_bound.csv")).unwrap();
    assert!(csv.starts_with("N,bound\n"));
    assert_eq!(csv.lines().count(), 9);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("scan_probe_bound.json")).unwrap()).unwrap();
    assert_eq!(meta["model"], "probe");
    assert_eq!(meta["params"]["theta"], std::f64::consts::FRAC_PI_4);
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("params.json");
    std::fs::write(&cfg, r#"{"a": 1.0, "b": -2.0, "gamma": 0.2, "t": 3.0}"#).unwrap();
    let o = ptmetro(&["evolve", "--config", cfg.to_str().unwrap(), "--b", "-0.5", "--a", "0.3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["a"].as_f64(), v["b"].as_f64()), (Some(0.3), Some(-0.5)));
    assert_eq!((v["gamma"].as_f64(), v["t"].as_f64()), (Some(0.2), Some(3.0)));
    assert_eq!(v["regime"]["kind"], "broken");
}

#[test]
fn evolve_switches_to_rk4_when_driven() {
    let o = ptmetro(&["evolve", "--omega", "0.5", "--t", "0.5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["method"], "rk4");
}

#[test]
fn qfi_probe_and_eigen_reports() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&ptmetro(&["qfi", "--t", "10"]))).unwrap();
    let expected = (-1f64).exp() * 100.0 / (2.0 - (-1f64).exp());
    assert!((v["classical_projective_closed"].as_f64().unwrap() - expected).abs() < 1e-12);
    assert!(v["classical_projective"].as_f64().unwrap() <= v["qfi_spectral"].as_f64().unwrap() + 1e-8);

    let v: serde_json::Value =
        serde_json::from_str(&stdout(&ptmetro(&["probe", "--n-qubits", "10", "--gamma", "0.1"]))).unwrap();
    assert!((v["optimal"]["f_max"].as_f64().unwrap() - 50.0).abs() < 1e-12);
    assert!((v["oracle_over_closed"].as_f64().unwrap() - 2.0).abs() < 1e-6);

    let v: serde_json::Value =
        serde_json::from_str(&stdout(&ptmetro(&["eigen", "--omega", "2", "--gamma", "1"]))).unwrap();
    assert!((v["qfi"]["closed"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-15);
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&ptmetro(&["eigen", "--omega", "1", "--gamma", "1"]))).unwrap();
    assert_eq!(v["coalesced"], true);
    assert!(v["qfi"]["refused"].is_string());
}

#[test]
fn exit_codes() {
    assert_eq!(ptmetro(&["fig", "8"]).status.code(), Some(2));
    assert_eq!(ptmetro(&["scan", "--bogus"]).status.code(), Some(2));
    assert_eq!(ptmetro(&["scan", "--gamma", "-1"]).status.code(), Some(2));
    assert_eq!(ptmetro(&["scan", "--points", "1"]).status.code(), Some(2));
    // Exceptional-point solution is singular at b = −1/2.
    assert_eq!(ptmetro(&["evolve", "--a", "0.5", "--b", "-0.5"]).status.code(), Some(3));
    let o = ptmetro(&[
        "scan",
        "--model",
        "eigenstate",
        "--axis",
        "omega",
        "--gamma",
        "1",
        "--t-min",
        "1",
        "--t-max",
        "2",
        "--points",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("omega = 1"));
}

#[test]
fn verify_reports_findings_and_fails_on_red_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let o = ptmetro(&["verify", "--out", dir.path().to_str().unwrap()]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = report["checks"].as_array().unwrap();
    let find = |name: &str| {
        checks
            .iter()
            .find(|c| c["name"] == name)
            .unwrap_or_else(|| panic!("{name}"))
    };
    assert_eq!(find("mutation_gamma_sign_flip_detected")["status"], "pass");
    assert_eq!(find("physicality")["status"], "pass");
    assert_eq!(find("probe_qfi_closed_form_ratio")["status"], "info");
    assert!((find("probe_qfi_closed_form_ratio")["value"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    assert!(find("bound_n2_constant")["value"].is_number());
    let failed = report["failed"].as_u64().unwrap();
    assert_eq!(o.status.code(), Some(if failed == 0 { 0 } else { 1 }));
    assert!(dir.path().join("verify.json").exists());
}
