use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn qfridge(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfridge"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn steady_reports_cross_check_and_audit() {
    let out = tempfile::tempdir().unwrap();
    let o = qfridge(&["steady"], &configs().join("steady-absorption.toml"), out.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(out.path());
    assert!(r["results"]["j_c_delta"].as_f64().unwrap() < 1e-8 * r["results"]["j_c_analytic"].as_f64().unwrap());
    let audit = &r["law_audit"];
    assert!(audit["first_law_residual"].as_f64().unwrap() <= 1e-10);
    assert!(audit["second_law_min_sigma"].as_f64().unwrap() >= -1e-10);
    assert!(audit["kms"].as_array().unwrap().iter().all(|k| k["passed"] == true));
    assert!(r["provenance"]["version"].is_string());
    assert!(r["provenance"]["wall_time_s"].is_number());
}

#[test]
fn driven_steady_reports_cop_like_ratio() {
    let out = tempfile::tempdir().unwrap();
    let o = qfridge(&["steady"], &configs().join("steady-driven.toml"), out.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(out.path());
    assert!(r["results"]["currents"]["J_c"].as_f64().unwrap() > 0.0);
    assert!(r["results"]["cop"].as_f64().unwrap() > 0.0);
}

#[test]
fn cooling_csv_is_deterministic_and_unit_tagged() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = configs().join("cool-bosonic.toml");
    assert_eq!(qfridge(&["cool"], &cfg, a.path()).status.code(), Some(0));
    assert_eq!(qfridge(&["cool"], &cfg, b.path()).status.code(), Some(0));
    let ta = fs::read(a.path().join("trajectory.csv")).unwrap();
    assert_eq!(ta, fs::read(b.path().join("trajectory.csv")).unwrap());
    let text = String::from_utf8(ta).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# units: hbar = k_B = 1"));
    assert_eq!(lines.next().unwrap(), "t,T_c,omega_c,lambda,J_c");
    let r = report(a.path());
    let zeta = r["results"]["fit"]["zeta"].as_f64().unwrap();
    assert!((zeta - 1.0).abs() < 0.05);
    assert_eq!(r["results"]["verdict"]["verdict"], "exponential-approach");
}

#[test]
fn subohmic_cooling_reaches_zero_in_finite_time() {
    let out = tempfile::tempdir().unwrap();
    let o = qfridge(&["cool"], &configs().join("cool-subohmic.toml"), out.path());
    assert_eq!(o.status.code(), Some(0));
    let r = report(out.path());
    assert_eq!(r["results"]["verdict"]["verdict"], "finite-time-zero");
    assert!(r["results"]["t0_relative_delta"].as_f64().unwrap() < 1e-2);
}

#[test]
fn gas_cooling_gives_three_halves() {
    let out = tempfile::tempdir().unwrap();
    assert_eq!(qfridge(&["cool"], &configs().join("cool-gas.toml"), out.path()).status.code(), Some(0));
    let zeta = report(out.path())["results"]["fit"]["zeta"].as_f64().unwrap();
    assert!((zeta - 1.5).abs() < 0.05, "zeta {zeta}");
}

#[test]
fn sweep_is_thread_count_independent() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = configs().join("sweep.toml");
    assert_eq!(qfridge(&["sweep", "--threads", "1"], &cfg, a.path()).status.code(), Some(0));
    assert_eq!(qfridge(&["sweep", "--threads", "4"], &cfg, b.path()).status.code(), Some(0));
    let sa = fs::read_to_string(a.path().join("sweep.csv")).unwrap();
    assert_eq!(sa, fs::read_to_string(b.path().join("sweep.csv")).unwrap());
    assert!(sa.starts_with("# units: hbar = k_B = 1"));
    assert_eq!(sa.matches("unstable field, skipped").count(), 2);
    let r = report(a.path());
    assert_eq!(r["results"]["rows"], 14);
    assert_eq!(r["results"]["failed"], 0);
    for row in r["results"]["table"].as_array().unwrap() {
        if row["status"] == "ok" && row["bath"] == "bosonic" {
            let (k, z) = (row["kappa"].as_f64().unwrap(), row["zeta"].as_f64().unwrap());
            assert!((z - k).abs() < 0.05, "kappa {k} zeta {z}");
        }
    }
}

#[test]
fn verify_laws_passes_and_fault_injection_exits_one() {
    let out = tempfile::tempdir().unwrap();
    let o = qfridge(&["verify-laws"], &configs().join("verify-laws.toml"), out.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(out.path());
    assert!(r["law_audit"]["second_law_min_sigma"].as_f64().unwrap() >= -1e-10);

    let bad = tempfile::tempdir().unwrap();
    let o = qfridge(&["verify-laws"], &configs().join("verify-laws-fault.toml"), bad.path());
    assert_eq!(o.status.code(), Some(1));
    let r = report(bad.path());
    assert_eq!(r["passed"], false);
    assert!(r["law_audit"]["kms"].as_array().unwrap().iter().any(|k| k["passed"] == false));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let text = fs::read_to_string(configs().join("steady-absorption.toml")).unwrap();

    fs::write(&path, text.replace("omega_h = 2.0", "omega_h = 2.0\nunknown_key = 1")).unwrap();
    assert_eq!(qfridge(&["steady"], &path, dir.path()).status.code(), Some(2));

    fs::write(&path, text.replace("version = 1", "")).unwrap();
    assert_eq!(qfridge(&["steady"], &path, dir.path()).status.code(), Some(2));

    fs::write(&path, text.replace("beta_c = 1.5", "beta_c = 0.5")).unwrap();
    assert_eq!(qfridge(&["steady"], &path, dir.path()).status.code(), Some(2));

    // Steady-only fridge parameters do not make a cooling scenario.
    assert_eq!(qfridge(&["cool"], &configs().join("steady-absorption.toml"), dir.path()).status.code(), Some(2));
    assert_eq!(qfridge(&["steady"], &dir.path().join("missing.toml"), dir.path()).status.code(), Some(2));
}

#[test]
fn echoed_config_reproduces_the_run() {
    let a = tempfile::tempdir().unwrap();
    assert_eq!(qfridge(&["cool"], &configs().join("cool-bosonic.toml"), a.path()).status.code(), Some(0));
    let echoed: qfridge_cli::ScenarioConfig = serde_json::from_value(report(a.path())["config"].clone()).unwrap();
    let path = a.path().join("echo.toml");
    fs::write(&path, toml::to_string(&echoed).unwrap()).unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(qfridge(&["cool"], &path, b.path()).status.code(), Some(0));
    assert_eq!(
        fs::read(a.path().join("trajectory.csv")).unwrap(),
        fs::read(b.path().join("trajectory.csv")).unwrap()
    );
}
